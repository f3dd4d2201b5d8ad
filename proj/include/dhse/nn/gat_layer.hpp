#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dhse/matrix.hpp"
#include "dhse/nn/activations.hpp"
#include "dhse/nn/attention.hpp"
#include "dhse/nn/param.hpp"
#include "dhse/rng.hpp"

namespace dhse {

// One attention head: projection plus the score vector split into source and
// destination halves (attn[0..out) and attn[out..2*out)).
struct GatHead {
  Matrix weight;  // in x out
  std::vector<double> attn;
  Matrix weight_grad;
  std::vector<double> attn_grad;
};

struct GatHeadCache {
  Matrix z;        // projected features
  EdgeAttention att;
  Matrix agg_pre;  // sum_j alpha_ij z_j, before the outer activation
};

struct GatLayerCache {
  std::vector<GatHeadCache> heads;
};

// Multi-head graph attention: per head, scores are leaky-relu of the
// concatenated projected pair, softmax-normalized over N(i) ∪ {i}; the
// activated per-head aggregates are mean-pooled.
struct GatLayer {
  std::vector<GatHead> heads;
  double leaky_slope = 0.2;
  Activation activation = Activation::elu;

  GatLayer() = default;

  GatLayer(std::size_t in, std::size_t out, std::size_t num_heads, Rng& rng,
           double slope = 0.2, Activation act = Activation::elu)
      : leaky_slope(slope), activation(act) {
    const double wb = 1.0 / std::sqrt(static_cast<double>(in));
    const double ab = 1.0 / std::sqrt(static_cast<double>(2 * out));
    heads.resize(num_heads);
    for (auto& h : heads) {
      h.weight = Matrix(in, out);
      for (double& w : h.weight.data()) w = rng.uniform(-wb, wb);
      h.attn.resize(2 * out);
      for (double& a : h.attn) a = rng.uniform(-ab, ab);
      h.weight_grad = Matrix(in, out);
      h.attn_grad.assign(2 * out, 0.0);
    }
  }

  std::size_t in_width() const { return heads.front().weight.rows(); }
  std::size_t out_width() const { return heads.front().weight.cols(); }

  Matrix forward(const Matrix& x, const Csr& attn_adj, GatLayerCache& cache) const {
    const std::size_t out_w = out_width();
    cache.heads.assign(heads.size(), {});
    Matrix pooled(x.rows(), out_w);
    for (std::size_t h = 0; h < heads.size(); ++h) {
      GatHeadCache& hc = cache.heads[h];
      hc.z = matmul(x, heads[h].weight);
      const std::size_t d = out_w;
      attention_forward(attn_adj, hc.z, {heads[h].attn.data(), d},
                        {heads[h].attn.data() + d, d}, leaky_slope, hc.att);
      hc.agg_pre = spmm(attn_adj, hc.att.alpha, hc.z);
      for (std::size_t i = 0; i < pooled.size(); ++i) {
        pooled.data()[i] += activate(activation, hc.agg_pre.data()[i]);
      }
    }
    scale_inplace(pooled, 1.0 / static_cast<double>(heads.size()));
    return pooled;
  }

  Matrix backward(const Matrix& x, const Csr& attn_adj, const Matrix& grad_out,
                  GatLayerCache& cache) {
    const std::size_t d = out_width();
    const double inv_k = 1.0 / static_cast<double>(heads.size());
    Matrix grad_x(x.rows(), x.cols());
    for (std::size_t h = 0; h < heads.size(); ++h) {
      GatHeadCache& hc = cache.heads[h];
      // through mean pool and the outer activation
      Matrix grad_agg(grad_out.rows(), d);
      for (std::size_t i = 0; i < grad_agg.size(); ++i) {
        grad_agg.data()[i] =
            grad_out.data()[i] * inv_k * activate_grad(activation, hc.agg_pre.data()[i]);
      }
      // aggregation: dz_j += alpha_ij * dagg_i; dalpha_ij = dagg_i . z_j
      Matrix grad_z(x.rows(), d);
      spmm_transpose_accum(attn_adj, hc.att.alpha, grad_agg, grad_z);
      std::vector<double> grad_alpha(attn_adj.num_entries(), 0.0);
      for (NodeId i = 0; i < attn_adj.num_nodes(); ++i) {
        const double* gi = grad_agg.row(i);
        for (std::size_t e = attn_adj.offsets[i]; e < attn_adj.offsets[i + 1]; ++e) {
          grad_alpha[e] = dot({gi, d}, hc.z.row_span(attn_adj.targets[e]));
        }
      }
      attention_backward(attn_adj, hc.z, {heads[h].attn.data(), d},
                         {heads[h].attn.data() + d, d}, leaky_slope, hc.att, grad_alpha,
                         {heads[h].attn_grad.data(), d}, {heads[h].attn_grad.data() + d, d},
                         grad_z);
      // projection
      matmul_tn_accum(x, grad_z, heads[h].weight_grad);
      add_inplace(grad_x, matmul_nt(grad_z, heads[h].weight));
    }
    return grad_x;
  }

  void zero_grad() {
    for (auto& h : heads) {
      h.weight_grad.fill(0.0);
      std::fill(h.attn_grad.begin(), h.attn_grad.end(), 0.0);
    }
  }

  void collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
    for (std::size_t h = 0; h < heads.size(); ++h) {
      const std::string p = prefix + ".head" + std::to_string(h);
      out.push_back(param_ref(p + ".weight", heads[h].weight, heads[h].weight_grad));
      out.push_back(param_ref(p + ".attn", heads[h].attn, heads[h].attn_grad));
    }
  }
};

}  // namespace dhse
