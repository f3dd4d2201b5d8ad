#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dhse/correct_smooth.hpp"
#include "dhse/dataset.hpp"
#include "dhse/distance_features.hpp"
#include "dhse/nn/model.hpp"
#include "dhse/nn/trainer.hpp"
#include "dhse/structure_features.hpp"

namespace dhse {

// Structure columns that survive the ablation flags. Layout per
// structure_vector: [in_deg, out_deg, (tri, clust, sq, dens, loops, trans)
// per hop]; the first three per hop are node-level, the rest graph-level.
inline std::vector<std::size_t> kept_structure_columns(int k, const AblationFlags& ablation) {
  std::vector<std::size_t> cols;
  if (!ablation.drop_degree) {
    cols.push_back(0);
    cols.push_back(1);
  }
  for (int r = 0; r < k; ++r) {
    const std::size_t base = 2 + 6 * static_cast<std::size_t>(r);
    if (!ablation.drop_node_level) {
      cols.push_back(base);
      cols.push_back(base + 1);
      cols.push_back(base + 2);
    }
    if (!ablation.drop_graph_level) {
      cols.push_back(base + 3);
      cols.push_back(base + 4);
      cols.push_back(base + 5);
    }
  }
  return cols;
}

// Applies the ablation drops and packs the raw blocks for the model. The
// structure matrix must have the full 6k+2 layout.
inline FeatureInputs assemble_inputs(const Matrix& intrinsic, const Matrix& structure,
                                     const Matrix& distance, int k,
                                     const AblationFlags& ablation) {
  if (!structure.empty() && structure.cols() != structure_width(k)) {
    throw ValidationError("structure block width " + std::to_string(structure.cols()) +
                          " does not match 6k+2 for k=" + std::to_string(k));
  }
  FeatureInputs inputs;
  inputs.intrinsic = intrinsic;
  if (!ablation.drop_distance) inputs.distance = distance;
  const auto cols = kept_structure_columns(k, ablation);
  if (!cols.empty() && !structure.empty()) {
    inputs.structure = select_columns(structure, cols);
  }
  return inputs;
}

// Everything needed to rebuild the model and its feature pipeline from a
// checkpoint: architecture, hop count, ablation, branch widths, init seed.
struct ModelSpec {
  ModelConfig model;
  int k = 2;
  AblationFlags ablation;
  std::size_t intrinsic_width = 0;
  std::size_t distance_width = 0;
  std::size_t structure_width = 0;
  std::uint64_t seed = 42;
};

inline ModelSpec make_model_spec(const ModelConfig& model, int k, const AblationFlags& ablation,
                                 const FeatureInputs& inputs, std::uint64_t seed) {
  ModelSpec spec;
  spec.model = model;
  spec.k = k;
  spec.ablation = ablation;
  spec.intrinsic_width = inputs.intrinsic.cols();
  spec.distance_width = inputs.distance.cols();
  spec.structure_width = inputs.structure.cols();
  spec.seed = seed;
  return spec;
}

inline DhseModel build_model(const ModelSpec& spec) {
  return DhseModel(spec.model, spec.intrinsic_width, spec.distance_width, spec.structure_width,
                   spec.seed);
}

// Extracts (or loads from cache) the structure and distance blocks, then
// assembles the ablated inputs for a dataset.
struct ExtractedFeatures {
  Matrix structure;
  Matrix distance;
};

inline ExtractedFeatures extract_features(const Graph& g, int k, unsigned threads = 0) {
  ExtractedFeatures out;
  out.structure = structure_matrix(g, k, threads);
  out.distance = distance_matrix(g, k, threads);
  return out;
}

inline LabelState label_state_from(const Matrix& probs, const Dataset& ds) {
  LabelState state;
  state.z = probs;
  state.labels = ds.labels;
  state.partition = ds.split;
  state.num_classes = ds.num_classes;
  return state;
}

}  // namespace dhse
