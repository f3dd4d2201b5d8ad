#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dhse/error.hpp"
#include "dhse/nn/adam.hpp"
#include "dhse/nn/model.hpp"
#include "dhse/split.hpp"

namespace dhse {

struct TrainConfig {
  int epochs = 300;
  double lr = 0.01;
  std::uint64_t seed = 42;
};

struct EpochMetrics {
  int epoch = 0;
  double loss = 0.0;
  double train_accuracy = 0.0;
  double valid_accuracy = 0.0;
};

struct TrainResult {
  std::vector<EpochMetrics> history;
  ModelOutput final_output;

  const EpochMetrics& final_epoch() const { return history.back(); }
};

// Full-batch training: mean cross-entropy on the train rows, Adam updates,
// per-epoch train/valid accuracy. Deterministic for a fixed seed. Throws
// DivergenceError on a non-finite loss.
inline TrainResult train_model(DhseModel& model, const FeatureInputs& feats,
                               const GraphContext& ctx, std::span<const int> labels,
                               const Split& split, const TrainConfig& tc) {
  if (split.train.empty()) throw ValidationError("training index set is empty");
  for (NodeId i : split.train) {
    if (labels[i] < 0 || labels[i] >= model.config().num_classes) {
      throw ValidationError("label out of range at node " + std::to_string(i));
    }
  }
  Adam opt(tc.lr);
  Rng dropout_rng(tc.seed);
  auto params = model.params();
  TrainResult result;
  result.history.reserve(static_cast<std::size_t>(tc.epochs));
  ModelTape tape;
  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    model.zero_grad();
    ModelOutput out = model.forward(feats, ctx, tape, /*training=*/true, &dropout_rng);
    const double loss = cross_entropy(out.logits, labels, split.train);
    if (!std::isfinite(loss)) {
      throw DivergenceError("training diverged at epoch " + std::to_string(epoch) +
                            " (loss = " + std::to_string(loss) + ")");
    }
    const Matrix grad_logits = cross_entropy_grad(out.probs, labels, split.train);
    model.backward(feats, ctx, tape, grad_logits);
    opt.step(params);

    // metrics reflect the post-update model, without dropout noise
    out = model.forward(feats, ctx, tape);
    EpochMetrics m;
    m.epoch = epoch;
    m.loss = loss;
    m.train_accuracy = accuracy(out.probs, labels, split.train);
    m.valid_accuracy = split.valid.empty() ? 0.0 : accuracy(out.probs, labels, split.valid);
    result.history.push_back(m);
    if (epoch == tc.epochs) result.final_output = std::move(out);
  }
  return result;
}

}  // namespace dhse
