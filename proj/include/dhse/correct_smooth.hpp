#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dhse/error.hpp"
#include "dhse/matrix.hpp"
#include "dhse/normalized_adjacency.hpp"
#include "dhse/split.hpp"

namespace dhse {

// Base predictions plus ground truth and the train/valid/unlabeled partition.
// The partition must be disjoint and cover every node; test nodes play the
// unlabeled role during post-processing.
struct LabelState {
  Matrix z;                // soft predictions, row-stochastic
  std::vector<int> labels; // ground truth class ids (used on train rows)
  Split partition;
  int num_classes = 0;
};

inline void validate_label_state(const LabelState& state) {
  const std::size_t n = state.z.rows();
  if (state.labels.size() != n) throw ValidationError("labels and Z disagree on node count");
  if (static_cast<std::size_t>(state.z.cols()) != static_cast<std::size_t>(state.num_classes)) {
    throw ValidationError("Z column count is not the class count");
  }
  std::vector<char> seen(n, 0);
  std::size_t covered = 0;
  for (const auto* part : {&state.partition.train, &state.partition.valid,
                           &state.partition.test}) {
    for (NodeId i : *part) {
      if (i >= n) throw ValidationError("partition index out of range");
      if (seen[i]) throw ValidationError("partition sets overlap at node " + std::to_string(i));
      seen[i] = 1;
      ++covered;
    }
  }
  if (covered != n) throw ValidationError("partition does not cover every node");
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < state.z.cols(); ++j) sum += state.z(i, j);
    if (std::abs(sum - 1.0) > 1e-6) {
      throw ValidationError("Z row " + std::to_string(i) + " is not a distribution");
    }
  }
  for (NodeId i : state.partition.train) {
    if (state.labels[i] < 0 || state.labels[i] >= state.num_classes) {
      throw ValidationError("train label out of range at node " + std::to_string(i));
    }
  }
}

struct CsConfig {
  double alpha_correct = 0.9;
  double alpha_smooth = 0.8;
  double scale = 1.0;  // the FDiff-scale factor on the spread error
  int max_iters = 1000;
  double tol = 1e-9;
};

inline void validate_cs_config(const CsConfig& cfg) {
  if (cfg.alpha_correct <= 0.0 || cfg.alpha_correct >= 1.0 || cfg.alpha_smooth <= 0.0 ||
      cfg.alpha_smooth >= 1.0) {
    throw ValidationError("correct-and-smooth alphas must lie in (0, 1)");
  }
  if (cfg.scale < 0.0) throw ValidationError("scale must be non-negative");
  if (cfg.max_iters < 1) throw ValidationError("max_iters must be positive");
  if (cfg.tol <= 0.0) throw ValidationError("tol must be positive");
}

// E = Z - Y on train rows, zero elsewhere.
inline Matrix compute_error(const LabelState& state) {
  Matrix e(state.z.rows(), state.z.cols());
  for (NodeId i : state.partition.train) {
    const double* zi = state.z.row(i);
    double* ei = e.row(i);
    for (std::size_t j = 0; j < e.cols(); ++j) ei[j] = zi[j];
    ei[state.labels[i]] -= 1.0;
  }
  return e;
}

// Fixed-point iteration X <- (1 - alpha) B + alpha S X from X = B, stopping
// when the max-abs change drops below tol or after max_iters sweeps. For
// alpha < 1 this contracts to the solution of (I - alpha S) X = (1 - alpha) B.
inline Matrix spread(const Matrix& b, const NormalizedAdjacency& s, double alpha, int max_iters,
                     double tol) {
  if (alpha <= 0.0 || alpha >= 1.0) throw ValidationError("spread alpha must lie in (0, 1)");
  Matrix x = b;
  for (int it = 0; it < max_iters; ++it) {
    Matrix next = s.multiply(x);
    scale_inplace(next, alpha);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next.data()[i] += (1.0 - alpha) * b.data()[i];
    }
    const double delta = max_abs_diff(next, x);
    x = std::move(next);
    if (delta < tol) break;
  }
  return x;
}

// FDiff-scale correction: Z + s * E_hat, no row renormalization.
inline Matrix correct(const Matrix& z, const Matrix& e_hat, double scale) {
  if (z.rows() != e_hat.rows() || z.cols() != e_hat.cols()) {
    throw ValidationError("corrected prediction shape mismatch");
  }
  Matrix out = z;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += scale * e_hat.data()[i];
  return out;
}

// Anchor: ground truth on train rows, corrected predictions elsewhere.
inline Matrix smooth_anchor(const Matrix& z_corrected, const LabelState& state) {
  Matrix g = z_corrected;
  for (NodeId i : state.partition.train) {
    double* gi = g.row(i);
    for (std::size_t j = 0; j < g.cols(); ++j) gi[j] = 0.0;
    gi[state.labels[i]] = 1.0;
  }
  return g;
}

inline Matrix smooth(const Matrix& z_corrected, const LabelState& state,
                     const NormalizedAdjacency& s, double alpha, int max_iters, double tol) {
  return spread(smooth_anchor(z_corrected, state), s, alpha, max_iters, tol);
}

// Row-wise argmax; ties resolve to the lowest class index.
inline std::vector<int> predict(const Matrix& g) {
  std::vector<int> out(g.rows(), 0);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    const double* row = g.row(i);
    int best = 0;
    for (std::size_t j = 1; j < g.cols(); ++j) {
      if (row[j] > row[best]) best = static_cast<int>(j);
    }
    out[i] = best;
  }
  return out;
}

// Correct then smooth: spread the train residual, add it back scaled, anchor
// the result on the train labels, and spread again.
inline Matrix correct_and_smooth(const LabelState& state, const NormalizedAdjacency& s,
                                 const CsConfig& cfg) {
  validate_cs_config(cfg);
  validate_label_state(state);
  const Matrix e = compute_error(state);
  const Matrix e_hat = spread(e, s, cfg.alpha_correct, cfg.max_iters, cfg.tol);
  const Matrix z_corrected = correct(state.z, e_hat, cfg.scale);
  return smooth(z_corrected, state, s, cfg.alpha_smooth, cfg.max_iters, cfg.tol);
}

}  // namespace dhse
