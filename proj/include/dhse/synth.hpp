#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dhse/dataset.hpp"
#include "dhse/error.hpp"
#include "dhse/matrix.hpp"
#include "dhse/rng.hpp"

namespace dhse {

// Planted-partition benchmark: contiguous class blocks, intra-class edge
// probability p_in, inter-class p_out, Gaussian class-conditional intrinsic
// features, stratified train/valid/test split.
struct SynthConfig {
  std::size_t nodes = 1000;
  int classes = 4;
  double p_in = 0.05;
  double p_out = 0.005;
  std::size_t feature_dim = 16;
  double feature_scale = 1.0;  // spread of the class means
  double feature_noise = 1.0;  // per-node noise around the class mean
  double train_fraction = 0.6;
  double valid_fraction = 0.2;
  std::uint64_t seed = 42;
};

struct SynthData {
  std::size_t num_nodes = 0;
  std::vector<Edge> edges;  // one record per undirected pair
  Matrix features;
  std::vector<int> labels;
  Split split;
};

inline void validate_synth_config(const SynthConfig& cfg) {
  if (cfg.classes < 2) throw ValidationError("synthetic dataset needs at least 2 classes");
  if (cfg.nodes < static_cast<std::size_t>(cfg.classes)) {
    throw ValidationError("synthetic dataset needs at least one node per class");
  }
  if (cfg.p_in < 0.0 || cfg.p_in > 1.0 || cfg.p_out < 0.0 || cfg.p_out > 1.0) {
    throw ValidationError("edge probabilities must lie in [0, 1]");
  }
  if (cfg.feature_dim == 0) throw ValidationError("feature dimension must be positive");
  if (cfg.train_fraction <= 0.0 || cfg.valid_fraction < 0.0 ||
      cfg.train_fraction + cfg.valid_fraction >= 1.0) {
    throw ValidationError("split fractions must be positive and leave room for a test set");
  }
}

inline SynthData make_planted_partition(const SynthConfig& cfg) {
  validate_synth_config(cfg);
  Rng rng(cfg.seed);
  SynthData data;
  data.num_nodes = cfg.nodes;

  data.labels.resize(cfg.nodes);
  for (std::size_t i = 0; i < cfg.nodes; ++i) {
    data.labels[i] = static_cast<int>(i * static_cast<std::size_t>(cfg.classes) / cfg.nodes);
  }

  for (std::size_t u = 0; u < cfg.nodes; ++u) {
    for (std::size_t v = u + 1; v < cfg.nodes; ++v) {
      const double p = data.labels[u] == data.labels[v] ? cfg.p_in : cfg.p_out;
      if (rng.bernoulli(p)) {
        data.edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
      }
    }
  }

  Matrix means(static_cast<std::size_t>(cfg.classes), cfg.feature_dim);
  for (double& m : means.data()) m = cfg.feature_scale * rng.normal();
  data.features = Matrix(cfg.nodes, cfg.feature_dim);
  for (std::size_t i = 0; i < cfg.nodes; ++i) {
    const double* mu = means.row(static_cast<std::size_t>(data.labels[i]));
    double* row = data.features.row(i);
    for (std::size_t j = 0; j < cfg.feature_dim; ++j) {
      row[j] = mu[j] + cfg.feature_noise * rng.normal();
    }
  }

  // stratified split, shuffled within each class
  std::vector<std::vector<NodeId>> by_class(static_cast<std::size_t>(cfg.classes));
  for (std::size_t i = 0; i < cfg.nodes; ++i) {
    by_class[static_cast<std::size_t>(data.labels[i])].push_back(static_cast<NodeId>(i));
  }
  for (auto& members : by_class) {
    rng.shuffle(members);
    const auto n_train = static_cast<std::size_t>(cfg.train_fraction *
                                                  static_cast<double>(members.size()));
    const auto n_valid = static_cast<std::size_t>(cfg.valid_fraction *
                                                  static_cast<double>(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i < n_train) data.split.train.push_back(members[i]);
      else if (i < n_train + n_valid) data.split.valid.push_back(members[i]);
      else data.split.test.push_back(members[i]);
    }
  }
  std::sort(data.split.train.begin(), data.split.train.end());
  std::sort(data.split.valid.begin(), data.split.valid.end());
  std::sort(data.split.test.begin(), data.split.test.end());
  return data;
}

// Writes the dataset in the toolkit's file formats under dir.
inline DatasetPaths write_dataset(const SynthData& data, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const DatasetPaths paths = DatasetPaths::in_dir(dir);
  save_edge_list(paths.edges, data.edges);
  FeatureMatrix::from_matrix(data.features, "intrinsic").save(paths.features);
  save_labels(paths.labels, data.labels);
  save_ids(paths.train, data.split.train);
  save_ids(paths.valid, data.split.valid);
  save_ids(paths.test, data.split.test);
  return paths;
}

}  // namespace dhse
