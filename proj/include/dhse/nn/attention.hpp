#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "dhse/graph.hpp"
#include "dhse/matrix.hpp"
#include "dhse/nn/activations.hpp"

namespace dhse {

// Attention neighborhoods are N(i) ∪ {i}: the undirected rows with the node
// itself inserted once (no duplicate when a self-loop already exists).
inline Csr add_self_loops(const Csr& adj) {
  Csr out;
  const std::size_t n = adj.num_nodes();
  out.offsets.assign(n + 1, 0);
  out.targets.reserve(adj.num_entries() + n);
  for (NodeId u = 0; u < n; ++u) {
    const auto nb = adj.neighbors(u);
    bool inserted = false;
    for (NodeId v : nb) {
      if (!inserted && v >= u) {
        out.targets.push_back(u);
        inserted = true;
        if (v == u) continue;  // existing self-loop, keep one entry
      }
      out.targets.push_back(v);
    }
    if (!inserted) out.targets.push_back(u);
    out.offsets[u + 1] = out.targets.size();
  }
  return out;
}

// Row-stochastic edge attention: per row i over j in the adjacency,
//   alpha_ij = softmax_j leaky_relu(a_src . z_i + a_dst . z_j).
// Caches the per-node score halves for the backward pass.
struct EdgeAttention {
  std::vector<double> alpha;  // per adjacency entry
  std::vector<double> s_src;  // per node, a_src . z_i
  std::vector<double> s_dst;  // per node, a_dst . z_j
};

inline void attention_forward(const Csr& adj, const Matrix& z, std::span<const double> a_src,
                              std::span<const double> a_dst, double slope, EdgeAttention& att) {
  const std::size_t n = adj.num_nodes();
  att.alpha.assign(adj.num_entries(), 0.0);
  att.s_src.assign(n, 0.0);
  att.s_dst.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    att.s_src[i] = dot(a_src, z.row_span(i));
    att.s_dst[i] = dot(a_dst, z.row_span(i));
  }
  for (NodeId i = 0; i < n; ++i) {
    const std::size_t lo = adj.offsets[i], hi = adj.offsets[i + 1];
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t e = lo; e < hi; ++e) {
      const double score = leaky_relu(att.s_src[i] + att.s_dst[adj.targets[e]], slope);
      att.alpha[e] = score;
      mx = std::max(mx, score);
    }
    double sum = 0.0;
    for (std::size_t e = lo; e < hi; ++e) {
      att.alpha[e] = std::exp(att.alpha[e] - mx);
      sum += att.alpha[e];
    }
    for (std::size_t e = lo; e < hi; ++e) att.alpha[e] /= sum;
  }
}

// Given dL/dalpha, accumulates dL/da_src, dL/da_dst and adds the score-path
// contribution to dL/dz.
inline void attention_backward(const Csr& adj, const Matrix& z, std::span<const double> a_src,
                               std::span<const double> a_dst, double slope,
                               const EdgeAttention& att, std::span<const double> grad_alpha,
                               std::span<double> grad_a_src, std::span<double> grad_a_dst,
                               Matrix& grad_z) {
  const std::size_t n = adj.num_nodes();
  std::vector<double> grad_s_src(n, 0.0), grad_s_dst(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    const std::size_t lo = adj.offsets[i], hi = adj.offsets[i + 1];
    double dot_ad = 0.0;  // sum_j alpha_ij * dalpha_ij (softmax jacobian term)
    for (std::size_t e = lo; e < hi; ++e) dot_ad += att.alpha[e] * grad_alpha[e];
    for (std::size_t e = lo; e < hi; ++e) {
      const NodeId j = adj.targets[e];
      const double grad_score = att.alpha[e] * (grad_alpha[e] - dot_ad);
      const double raw = att.s_src[i] + att.s_dst[j];
      const double grad_raw = grad_score * leaky_relu_grad(raw, slope);
      grad_s_src[i] += grad_raw;
      grad_s_dst[j] += grad_raw;
    }
  }
  const std::size_t d = z.cols();
  for (std::size_t i = 0; i < n; ++i) {
    const double* zi = z.row(i);
    double* gz = grad_z.row(i);
    for (std::size_t c = 0; c < d; ++c) {
      grad_a_src[c] += grad_s_src[i] * zi[c];
      grad_a_dst[c] += grad_s_dst[i] * zi[c];
      gz[c] += grad_s_src[i] * a_src[c] + grad_s_dst[i] * a_dst[c];
    }
  }
}

// y_i = sum_j vals_ij * x_j over the adjacency entries.
inline Matrix spmm(const Csr& adj, std::span<const double> vals, const Matrix& x) {
  Matrix y(adj.num_nodes(), x.cols());
  for (NodeId i = 0; i < adj.num_nodes(); ++i) {
    double* yi = y.row(i);
    for (std::size_t e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) {
      const double v = vals[e];
      const double* xj = x.row(adj.targets[e]);
      for (std::size_t c = 0; c < x.cols(); ++c) yi[c] += v * xj[c];
    }
  }
  return y;
}

// y_j += sum_i vals_ij * g_i (the transpose product).
inline void spmm_transpose_accum(const Csr& adj, std::span<const double> vals, const Matrix& g,
                                 Matrix& y) {
  for (NodeId i = 0; i < adj.num_nodes(); ++i) {
    const double* gi = g.row(i);
    for (std::size_t e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) {
      const double v = vals[e];
      double* yj = y.row(adj.targets[e]);
      for (std::size_t c = 0; c < g.cols(); ++c) yj[c] += v * gi[c];
    }
  }
}

}  // namespace dhse
