#pragma once

#include <string>
#include <vector>

#include "dhse/error.hpp"
#include "dhse/matrix.hpp"
#include "dhse/nn/layer_norm.hpp"
#include "dhse/nn/linear.hpp"
#include "dhse/rng.hpp"

namespace dhse {

// One raw-feature branch: linear projection into the shared width, then
// layer norm so no single branch dominates the sum.
struct EncoderBranch {
  std::string name;
  LinearLayer lin;
  LayerNorm norm;
};

struct EncoderCache {
  std::vector<LayerNormCache> norms;
};

// Maps each raw feature block into a common hidden width and sums the
// normalized branch embeddings into the initial node representation.
struct DhseEncoder {
  std::vector<EncoderBranch> branches;
  std::size_t hidden = 0;
  double ln_epsilon = 1e-5;

  DhseEncoder() = default;

  explicit DhseEncoder(std::size_t hidden_width, double epsilon = 1e-5)
      : hidden(hidden_width), ln_epsilon(epsilon) {}

  void add_branch(const std::string& name, std::size_t in_width, Rng& rng) {
    EncoderBranch b;
    b.name = name;
    b.lin = LinearLayer(in_width, hidden, rng);
    b.norm = LayerNorm(hidden, ln_epsilon);
    branches.push_back(std::move(b));
  }

  // inputs[i] feeds branches[i]; all inputs must share the row count.
  Matrix forward(std::span<const Matrix* const> inputs, EncoderCache& cache) const {
    if (inputs.size() != branches.size()) {
      throw ValidationError("encoder expects " + std::to_string(branches.size()) +
                            " inputs, got " + std::to_string(inputs.size()));
    }
    cache.norms.assign(branches.size(), {});
    Matrix h;
    for (std::size_t b = 0; b < branches.size(); ++b) {
      const Matrix& x = *inputs[b];
      if (x.cols() != branches[b].lin.in_width()) {
        throw ValidationError("encoder branch '" + branches[b].name + "' expects width " +
                              std::to_string(branches[b].lin.in_width()) + ", got " +
                              std::to_string(x.cols()));
      }
      if (b > 0 && x.rows() != h.rows()) {
        throw ValidationError("encoder inputs disagree on the node count");
      }
      const Matrix projected = branches[b].lin.forward(x);
      const Matrix normed = branches[b].norm.forward(projected, cache.norms[b]);
      if (h.empty()) {
        h = normed;
      } else {
        add_inplace(h, normed);
      }
    }
    return h;
  }

  // The raw features are leaves; only parameter gradients are produced.
  void backward(std::span<const Matrix* const> inputs, const Matrix& grad_h,
                EncoderCache& cache) {
    for (std::size_t b = 0; b < branches.size(); ++b) {
      const Matrix grad_projected = branches[b].norm.backward(grad_h, cache.norms[b]);
      branches[b].lin.backward(*inputs[b], grad_projected);
    }
  }

  void zero_grad() {
    for (auto& b : branches) {
      b.lin.zero_grad();
      b.norm.zero_grad();
    }
  }

  void collect_params(std::vector<ParamRef>& out) {
    for (auto& b : branches) {
      b.lin.collect_params("encoder." + b.name, out);
      b.norm.collect_params("encoder." + b.name + ".norm", out);
    }
  }
};

}  // namespace dhse
