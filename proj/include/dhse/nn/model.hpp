#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dhse/error.hpp"
#include "dhse/graph.hpp"
#include "dhse/matrix.hpp"
#include "dhse/nn/agdn_layer.hpp"
#include "dhse/nn/encoder.hpp"
#include "dhse/nn/gat_layer.hpp"
#include "dhse/normalized_adjacency.hpp"
#include "dhse/rng.hpp"

namespace dhse {

enum class ModelKind { gat, agdn };

inline std::string model_kind_name(ModelKind k) { return k == ModelKind::gat ? "gat" : "agdn"; }

inline ModelKind parse_model_kind(const std::string& name) {
  if (name == "gat") return ModelKind::gat;
  if (name == "agdn") return ModelKind::agdn;
  throw ValidationError("unknown model kind: " + name);
}

// Which raw feature groups are removed before encoding.
struct AblationFlags {
  bool drop_degree = false;
  bool drop_node_level = false;
  bool drop_graph_level = false;
  bool drop_distance = false;
  bool no_encoding = false;  // bypass the encoders: concatenate raw blocks

  bool any() const {
    return drop_degree || drop_node_level || drop_graph_level || drop_distance || no_encoding;
  }
};

struct ModelConfig {
  ModelKind kind = ModelKind::agdn;
  int layers = 2;
  int heads = 3;
  int hidden = 64;
  int diffusion = 3;  // AGDN only
  AgdnTransition transition = AgdnTransition::attention;
  Activation activation = Activation::elu;
  bool use_encoder = true;
  double dropout = 0.0;
  int num_classes = 0;
  double leaky_slope = 0.2;
  double ln_epsilon = 1e-5;
};

// Raw per-node inputs after any ablation column drops. Empty matrices mark
// absent branches; all present matrices share the row count.
struct FeatureInputs {
  Matrix intrinsic;
  Matrix distance;
  Matrix structure;

  std::size_t num_nodes() const {
    if (!intrinsic.empty()) return intrinsic.rows();
    if (!distance.empty()) return distance.rows();
    return structure.rows();
  }
};

// Graph-derived operators shared by every layer and forward pass.
struct GraphContext {
  Csr attn_adj;                 // undirected view plus self-loops
  NormalizedAdjacency norm_adj;

  static GraphContext build(const Graph& g) {
    GraphContext ctx;
    ctx.attn_adj = add_self_loops(g.undirected());
    ctx.norm_adj = NormalizedAdjacency::build(g);
    return ctx;
  }
};

struct ModelOutput {
  Matrix logits;  // num_nodes x num_classes
  Matrix probs;   // row-stochastic softmax of the logits
};

struct ModelTape {
  EncoderCache encoder;
  Matrix input;                      // embedding fed to the first layer
  std::vector<Matrix> layer_inputs;  // input of each graph layer
  std::vector<Matrix> layer_raw;     // AGDN: pre-activation outputs between layers
  std::vector<GatLayerCache> gat;
  std::vector<AgdnCache> agdn;
  Matrix head_input;
  Matrix dropout_mask;  // empty when dropout off
};

inline Matrix softmax_rows(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const double* li = logits.row(i);
    double mx = li[0];
    for (std::size_t j = 1; j < logits.cols(); ++j) mx = std::max(mx, li[j]);
    double sum = 0.0;
    double* pi = p.row(i);
    for (std::size_t j = 0; j < logits.cols(); ++j) {
      pi[j] = std::exp(li[j] - mx);
      sum += pi[j];
    }
    for (std::size_t j = 0; j < logits.cols(); ++j) pi[j] /= sum;
  }
  return p;
}

// Mean cross-entropy over the given rows, computed from logits via
// log-sum-exp for stability.
inline double cross_entropy(const Matrix& logits, std::span<const int> labels,
                            std::span<const NodeId> rows) {
  if (rows.empty()) throw ValidationError("cross entropy over an empty index set");
  double total = 0.0;
  for (NodeId i : rows) {
    const double* li = logits.row(i);
    double mx = li[0];
    for (std::size_t j = 1; j < logits.cols(); ++j) mx = std::max(mx, li[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < logits.cols(); ++j) sum += std::exp(li[j] - mx);
    total += mx + std::log(sum) - li[labels[i]];
  }
  return total / static_cast<double>(rows.size());
}

// d(mean CE)/d(logits): (softmax - onehot) / |rows| on the given rows.
inline Matrix cross_entropy_grad(const Matrix& probs, std::span<const int> labels,
                                 std::span<const NodeId> rows) {
  Matrix g(probs.rows(), probs.cols());
  const double scale = 1.0 / static_cast<double>(rows.size());
  for (NodeId i : rows) {
    const double* pi = probs.row(i);
    double* gi = g.row(i);
    for (std::size_t j = 0; j < probs.cols(); ++j) gi[j] = pi[j] * scale;
    gi[labels[i]] -= scale;
  }
  return g;
}

inline std::vector<int> argmax_rows(const Matrix& m) {
  std::vector<int> out(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = m.row(i);
    int best = 0;
    for (std::size_t j = 1; j < m.cols(); ++j) {
      if (row[j] > row[best]) best = static_cast<int>(j);  // ties keep the lowest index
    }
    out[i] = best;
  }
  return out;
}

inline double accuracy(const Matrix& probs, std::span<const int> labels,
                       std::span<const NodeId> rows) {
  if (rows.empty()) return 0.0;
  const auto pred = argmax_rows(probs);
  std::size_t hits = 0;
  for (NodeId i : rows) {
    if (pred[i] == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

// Full node-classification model: optional sum-of-encodings front end, a
// stack of GAT or AGDN layers, and a linear softmax head.
class DhseModel {
 public:
  DhseModel() = default;

  // Branch widths of zero mean the branch is absent.
  DhseModel(const ModelConfig& cfg, std::size_t intrinsic_width, std::size_t distance_width,
            std::size_t structure_width, std::uint64_t seed)
      : cfg_(cfg) {
    if (cfg.num_classes < 2) throw ValidationError("model needs at least 2 classes");
    if (cfg.layers < 1) throw ValidationError("model needs at least 1 layer");
    if (cfg.hidden < 1) throw ValidationError("hidden width must be positive");
    Rng rng(seed);
    std::size_t in_width = 0;
    if (cfg.use_encoder) {
      encoder_ = DhseEncoder(static_cast<std::size_t>(cfg.hidden), cfg.ln_epsilon);
      if (intrinsic_width > 0) encoder_->add_branch("intrinsic", intrinsic_width, rng);
      if (distance_width > 0) encoder_->add_branch("distance", distance_width, rng);
      if (structure_width > 0) encoder_->add_branch("structure", structure_width, rng);
      if (encoder_->branches.empty()) throw ValidationError("no feature branches left");
      in_width = static_cast<std::size_t>(cfg.hidden);
    } else {
      in_width = intrinsic_width + distance_width + structure_width;
      if (in_width == 0) throw ValidationError("no feature columns left");
    }
    const auto hidden = static_cast<std::size_t>(cfg.hidden);
    for (int l = 0; l < cfg.layers; ++l) {
      const std::size_t w_in = (l == 0) ? in_width : hidden;
      if (cfg.kind == ModelKind::gat) {
        gat_layers_.emplace_back(w_in, hidden, static_cast<std::size_t>(cfg.heads), rng,
                                 cfg.leaky_slope, cfg.activation);
      } else {
        agdn_layers_.emplace_back(w_in, hidden, cfg.diffusion, rng, cfg.transition,
                                  cfg.leaky_slope);
      }
    }
    head_ = LinearLayer(hidden, static_cast<std::size_t>(cfg.num_classes), rng);
  }

  const ModelConfig& config() const { return cfg_; }

  ModelOutput forward(const FeatureInputs& feats, const GraphContext& ctx, ModelTape& tape,
                      bool training = false, Rng* dropout_rng = nullptr) const {
    tape = ModelTape{};
    tape.input = embed(feats, tape);

    if (training && cfg_.dropout > 0.0) {
      if (dropout_rng == nullptr) throw ValidationError("dropout requires an rng");
      tape.dropout_mask = Matrix(tape.input.rows(), tape.input.cols());
      const double keep = 1.0 - cfg_.dropout;
      for (std::size_t i = 0; i < tape.input.size(); ++i) {
        const double m = dropout_rng->bernoulli(keep) ? 1.0 / keep : 0.0;
        tape.dropout_mask.data()[i] = m;
        tape.input.data()[i] *= m;
      }
    }

    Matrix h = tape.input;
    if (cfg_.kind == ModelKind::gat) {
      tape.gat.resize(gat_layers_.size());
      for (std::size_t l = 0; l < gat_layers_.size(); ++l) {
        tape.layer_inputs.push_back(h);
        h = gat_layers_[l].forward(h, ctx.attn_adj, tape.gat[l]);
      }
    } else {
      tape.agdn.resize(agdn_layers_.size());
      for (std::size_t l = 0; l < agdn_layers_.size(); ++l) {
        tape.layer_inputs.push_back(h);
        h = agdn_layers_[l].forward(h, ctx.attn_adj, ctx.norm_adj, tape.agdn[l]);
        if (l + 1 < agdn_layers_.size()) {
          tape.layer_raw.push_back(h);
          for (double& v : h.data()) v = activate(cfg_.activation, v);
        }
      }
    }
    tape.head_input = h;

    ModelOutput out;
    out.logits = head_.forward(h);
    out.probs = softmax_rows(out.logits);
    return out;
  }

  void backward(const FeatureInputs& feats, const GraphContext& ctx, ModelTape& tape,
                const Matrix& grad_logits) {
    Matrix grad = head_.backward(tape.head_input, grad_logits);
    if (cfg_.kind == ModelKind::gat) {
      for (std::size_t l = gat_layers_.size(); l-- > 0;) {
        grad = gat_layers_[l].backward(tape.layer_inputs[l], ctx.attn_adj, grad, tape.gat[l]);
      }
    } else {
      for (std::size_t l = agdn_layers_.size(); l-- > 0;) {
        if (l + 1 < agdn_layers_.size()) {
          const Matrix& raw = tape.layer_raw[l];
          for (std::size_t i = 0; i < grad.size(); ++i) {
            grad.data()[i] *= activate_grad(cfg_.activation, raw.data()[i]);
          }
        }
        grad = agdn_layers_[l].backward(tape.layer_inputs[l], ctx.attn_adj, ctx.norm_adj, grad,
                                        tape.agdn[l]);
      }
    }

    if (!tape.dropout_mask.empty()) {
      for (std::size_t i = 0; i < grad.size(); ++i) grad.data()[i] *= tape.dropout_mask.data()[i];
    }

    if (encoder_) {
      std::vector<const Matrix*> inputs = branch_inputs(feats);
      encoder_->backward(inputs, grad, tape.encoder);
    }
  }

  void zero_grad() {
    if (encoder_) encoder_->zero_grad();
    for (auto& l : gat_layers_) l.zero_grad();
    for (auto& l : agdn_layers_) l.zero_grad();
    head_.zero_grad();
  }

  std::vector<ParamRef> params() {
    std::vector<ParamRef> out;
    if (encoder_) encoder_->collect_params(out);
    for (std::size_t l = 0; l < gat_layers_.size(); ++l) {
      gat_layers_[l].collect_params("gat" + std::to_string(l), out);
    }
    for (std::size_t l = 0; l < agdn_layers_.size(); ++l) {
      agdn_layers_[l].collect_params("agdn" + std::to_string(l), out);
    }
    head_.collect_params("head", out);
    return out;
  }

  const DhseEncoder* encoder() const { return encoder_ ? &*encoder_ : nullptr; }

 private:
  std::vector<const Matrix*> branch_inputs(const FeatureInputs& feats) const {
    std::vector<const Matrix*> inputs;
    for (const auto& b : encoder_->branches) {
      if (b.name == "intrinsic") inputs.push_back(&feats.intrinsic);
      else if (b.name == "distance") inputs.push_back(&feats.distance);
      else inputs.push_back(&feats.structure);
    }
    return inputs;
  }

  Matrix embed(const FeatureInputs& feats, ModelTape& tape) const {
    if (encoder_) {
      return encoder_->forward(branch_inputs(feats), tape.encoder);
    }
    const std::array<const Matrix*, 3> parts{&feats.intrinsic, &feats.distance,
                                             &feats.structure};
    return hconcat(parts);
  }

  ModelConfig cfg_;
  std::optional<DhseEncoder> encoder_;
  std::vector<GatLayer> gat_layers_;
  std::vector<AgdnLayer> agdn_layers_;
  LinearLayer head_;
};

}  // namespace dhse
