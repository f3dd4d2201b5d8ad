#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "dhse/matrix.hpp"
#include "dhse/nn/activations.hpp"
#include "dhse/nn/attention.hpp"
#include "dhse/nn/param.hpp"
#include "dhse/normalized_adjacency.hpp"
#include "dhse/rng.hpp"

namespace dhse {

// Transition operator for the diffusion walk: learned edge attention over the
// projected features (row-stochastic by construction), or the fixed
// symmetric-normalized adjacency for ablation.
enum class AgdnTransition { attention, norm_adj };

inline std::string transition_name(AgdnTransition t) {
  return t == AgdnTransition::attention ? "attention" : "norm_adj";
}

inline AgdnTransition parse_transition(const std::string& name) {
  if (name == "attention") return AgdnTransition::attention;
  if (name == "norm_adj") return AgdnTransition::norm_adj;
  throw ValidationError("unknown transition: " + name);
}

struct AgdnCache {
  std::vector<Matrix> hops;  // hops[k], k = 0..depth; hops[0] = x W
  EdgeAttention att;         // attention transition only
  Matrix hop_raw;            // n x (depth+1), scores before leaky-relu
  Matrix hop_theta;          // n x (depth+1), softmax over the depth axis
};

// Graph diffusion with hop-wise attention. The projected features are
// diffused depth times through the transition operator; per node, a softmax
// over leaky-relu([hop0 ‖ hopk] . attn_hop) weights the hop representations,
// and a residual projection of the input is added:
//   out = sum_k diag(theta^k) hops[k] + x W_r.
struct AgdnLayer {
  Matrix weight;      // in x out
  Matrix weight_res;  // in x out
  std::vector<double> attn_trans;  // 2*out, transition attention halves
  std::vector<double> attn_hop;    // 2*out, hop attention halves
  int depth = 3;
  AgdnTransition transition = AgdnTransition::attention;
  double leaky_slope = 0.2;

  Matrix weight_grad;
  Matrix weight_res_grad;
  std::vector<double> attn_trans_grad;
  std::vector<double> attn_hop_grad;

  AgdnLayer() = default;

  AgdnLayer(std::size_t in, std::size_t out, int diffusion_depth, Rng& rng,
            AgdnTransition trans = AgdnTransition::attention, double slope = 0.2)
      : depth(diffusion_depth), transition(trans), leaky_slope(slope) {
    if (depth < 0) throw ValidationError("diffusion depth must be >= 0");
    const double wb = 1.0 / std::sqrt(static_cast<double>(in));
    const double ab = 1.0 / std::sqrt(static_cast<double>(2 * out));
    weight = Matrix(in, out);
    weight_res = Matrix(in, out);
    for (double& w : weight.data()) w = rng.uniform(-wb, wb);
    for (double& w : weight_res.data()) w = rng.uniform(-wb, wb);
    attn_trans.resize(2 * out);
    attn_hop.resize(2 * out);
    if (transition == AgdnTransition::attention) {
      for (double& a : attn_trans) a = rng.uniform(-ab, ab);
    } else {
      std::fill(attn_trans.begin(), attn_trans.end(), 0.0);
    }
    for (double& a : attn_hop) a = rng.uniform(-ab, ab);
    weight_grad = Matrix(in, out);
    weight_res_grad = Matrix(in, out);
    attn_trans_grad.assign(2 * out, 0.0);
    attn_hop_grad.assign(2 * out, 0.0);
  }

  std::size_t in_width() const { return weight.rows(); }
  std::size_t out_width() const { return weight.cols(); }

  Matrix forward(const Matrix& x, const Csr& attn_adj, const NormalizedAdjacency& norm_adj,
                 AgdnCache& cache) const {
    const std::size_t n = x.rows();
    const std::size_t d = out_width();
    const std::size_t k_hops = static_cast<std::size_t>(depth) + 1;

    cache.hops.assign(k_hops, {});
    cache.hops[0] = matmul(x, weight);
    if (transition == AgdnTransition::attention) {
      attention_forward(attn_adj, cache.hops[0], {attn_trans.data(), d},
                        {attn_trans.data() + d, d}, leaky_slope, cache.att);
      for (std::size_t k = 1; k < k_hops; ++k) {
        cache.hops[k] = spmm(attn_adj, cache.att.alpha, cache.hops[k - 1]);
      }
    } else {
      for (std::size_t k = 1; k < k_hops; ++k) {
        cache.hops[k] = norm_adj.multiply(cache.hops[k - 1]);
      }
    }

    // hop scores: raw_ik = [hop0_i ‖ hopk_i] . attn_hop, then leaky-relu and
    // softmax over k
    cache.hop_raw = Matrix(n, k_hops);
    cache.hop_theta = Matrix(n, k_hops);
    const std::span<const double> c_src{attn_hop.data(), d};
    const std::span<const double> c_dst{attn_hop.data() + d, d};
    for (std::size_t i = 0; i < n; ++i) {
      const double base = dot(c_src, cache.hops[0].row_span(i));
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < k_hops; ++k) {
        const double raw = base + dot(c_dst, cache.hops[k].row_span(i));
        cache.hop_raw(i, k) = raw;
        const double act = leaky_relu(raw, leaky_slope);
        cache.hop_theta(i, k) = act;
        mx = std::max(mx, act);
      }
      double sum = 0.0;
      for (std::size_t k = 0; k < k_hops; ++k) {
        cache.hop_theta(i, k) = std::exp(cache.hop_theta(i, k) - mx);
        sum += cache.hop_theta(i, k);
      }
      for (std::size_t k = 0; k < k_hops; ++k) cache.hop_theta(i, k) /= sum;
    }

    Matrix out = matmul(x, weight_res);
    for (std::size_t i = 0; i < n; ++i) {
      double* oi = out.row(i);
      for (std::size_t k = 0; k < k_hops; ++k) {
        const double theta = cache.hop_theta(i, k);
        const double* hk = cache.hops[k].row(i);
        for (std::size_t c = 0; c < d; ++c) oi[c] += theta * hk[c];
      }
    }
    return out;
  }

  Matrix backward(const Matrix& x, const Csr& attn_adj, const NormalizedAdjacency& norm_adj,
                  const Matrix& grad_out, AgdnCache& cache) {
    const std::size_t n = x.rows();
    const std::size_t d = out_width();
    const std::size_t k_hops = static_cast<std::size_t>(depth) + 1;

    // residual path
    matmul_tn_accum(x, grad_out, weight_res_grad);
    Matrix grad_x = matmul_nt(grad_out, weight_res);

    // hop mixture: dtheta_ik = g_i . hopk_i ; dhops[k]_i += theta_ik g_i
    std::vector<Matrix> grad_hops(k_hops);
    for (std::size_t k = 0; k < k_hops; ++k) grad_hops[k] = Matrix(n, d);
    Matrix grad_theta(n, k_hops);
    for (std::size_t i = 0; i < n; ++i) {
      const double* gi = grad_out.row(i);
      for (std::size_t k = 0; k < k_hops; ++k) {
        grad_theta(i, k) = dot({gi, d}, cache.hops[k].row_span(i));
        const double theta = cache.hop_theta(i, k);
        double* gh = grad_hops[k].row(i);
        for (std::size_t c = 0; c < d; ++c) gh[c] += theta * gi[c];
      }
    }

    // softmax over k, then leaky-relu, then the score dot products
    const std::span<const double> c_src{attn_hop.data(), d};
    const std::span<const double> c_dst{attn_hop.data() + d, d};
    for (std::size_t i = 0; i < n; ++i) {
      double dot_td = 0.0;
      for (std::size_t k = 0; k < k_hops; ++k) dot_td += cache.hop_theta(i, k) * grad_theta(i, k);
      for (std::size_t k = 0; k < k_hops; ++k) {
        const double grad_act = cache.hop_theta(i, k) * (grad_theta(i, k) - dot_td);
        const double grad_raw = grad_act * leaky_relu_grad(cache.hop_raw(i, k), leaky_slope);
        // raw_ik = c_src . hop0_i + c_dst . hopk_i
        const double* h0 = cache.hops[0].row(i);
        const double* hk = cache.hops[k].row(i);
        double* g0 = grad_hops[0].row(i);
        double* gk = grad_hops[k].row(i);
        for (std::size_t c = 0; c < d; ++c) {
          attn_hop_grad[c] += grad_raw * h0[c];
          attn_hop_grad[d + c] += grad_raw * hk[c];
          g0[c] += grad_raw * attn_hop[c];
          gk[c] += grad_raw * attn_hop[d + c];
        }
      }
    }

    // diffusion chain: hops[k] = T hops[k-1]
    std::vector<double> grad_alpha(transition == AgdnTransition::attention
                                       ? attn_adj.num_entries()
                                       : 0,
                                   0.0);
    for (std::size_t k = k_hops - 1; k >= 1; --k) {
      if (transition == AgdnTransition::attention) {
        spmm_transpose_accum(attn_adj, cache.att.alpha, grad_hops[k], grad_hops[k - 1]);
        for (NodeId i = 0; i < n; ++i) {
          const double* gk = grad_hops[k].row(i);
          for (std::size_t e = attn_adj.offsets[i]; e < attn_adj.offsets[i + 1]; ++e) {
            grad_alpha[e] += dot({gk, d}, cache.hops[k - 1].row_span(attn_adj.targets[e]));
          }
        }
      } else {
        // S is symmetric, so the transpose product reuses multiply
        add_inplace(grad_hops[k - 1], norm_adj.multiply(grad_hops[k]));
      }
    }

    if (transition == AgdnTransition::attention) {
      attention_backward(attn_adj, cache.hops[0], {attn_trans.data(), d},
                         {attn_trans.data() + d, d}, leaky_slope, cache.att, grad_alpha,
                         {attn_trans_grad.data(), d}, {attn_trans_grad.data() + d, d},
                         grad_hops[0]);
    }

    // projection hops[0] = x W
    matmul_tn_accum(x, grad_hops[0], weight_grad);
    add_inplace(grad_x, matmul_nt(grad_hops[0], weight));
    return grad_x;
  }

  void zero_grad() {
    weight_grad.fill(0.0);
    weight_res_grad.fill(0.0);
    std::fill(attn_trans_grad.begin(), attn_trans_grad.end(), 0.0);
    std::fill(attn_hop_grad.begin(), attn_hop_grad.end(), 0.0);
  }

  void collect_params(const std::string& prefix, std::vector<ParamRef>& out) {
    out.push_back(param_ref(prefix + ".weight", weight, weight_grad));
    out.push_back(param_ref(prefix + ".weight_res", weight_res, weight_res_grad));
    if (transition == AgdnTransition::attention) {
      out.push_back(param_ref(prefix + ".attn_trans", attn_trans, attn_trans_grad));
    }
    out.push_back(param_ref(prefix + ".attn_hop", attn_hop, attn_hop_grad));
  }
};

}  // namespace dhse
