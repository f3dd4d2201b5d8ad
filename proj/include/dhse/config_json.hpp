#pragma once

// JSON (de)serialization for the checkpoint config block and CLI configs.
// Kept out of the core headers so the library itself stays dependency-free.

#include <json.hpp>

#include "dhse/pipeline.hpp"

namespace dhse {

inline nlohmann::json to_json(const ModelSpec& spec) {
  nlohmann::json j;
  j["model"] = model_kind_name(spec.model.kind);
  j["layers"] = spec.model.layers;
  j["heads"] = spec.model.heads;
  j["hidden"] = spec.model.hidden;
  j["diffusion"] = spec.model.diffusion;
  j["transition"] = transition_name(spec.model.transition);
  j["activation"] = activation_name(spec.model.activation);
  j["use_encoder"] = spec.model.use_encoder;
  j["dropout"] = spec.model.dropout;
  j["num_classes"] = spec.model.num_classes;
  j["leaky_slope"] = spec.model.leaky_slope;
  j["ln_epsilon"] = spec.model.ln_epsilon;
  j["k"] = spec.k;
  j["ablation"] = {{"drop_degree", spec.ablation.drop_degree},
                   {"drop_node_level", spec.ablation.drop_node_level},
                   {"drop_graph_level", spec.ablation.drop_graph_level},
                   {"drop_distance", spec.ablation.drop_distance},
                   {"no_encoding", spec.ablation.no_encoding}};
  j["widths"] = {{"intrinsic", spec.intrinsic_width},
                 {"distance", spec.distance_width},
                 {"structure", spec.structure_width}};
  j["seed"] = spec.seed;
  return j;
}

inline ModelSpec model_spec_from_json(const nlohmann::json& j) {
  ModelSpec spec;
  spec.model.kind = parse_model_kind(j.at("model").get<std::string>());
  spec.model.layers = j.at("layers").get<int>();
  spec.model.heads = j.at("heads").get<int>();
  spec.model.hidden = j.at("hidden").get<int>();
  spec.model.diffusion = j.at("diffusion").get<int>();
  spec.model.transition = parse_transition(j.at("transition").get<std::string>());
  spec.model.activation = parse_activation(j.at("activation").get<std::string>());
  spec.model.use_encoder = j.at("use_encoder").get<bool>();
  spec.model.dropout = j.at("dropout").get<double>();
  spec.model.num_classes = j.at("num_classes").get<int>();
  spec.model.leaky_slope = j.at("leaky_slope").get<double>();
  spec.model.ln_epsilon = j.at("ln_epsilon").get<double>();
  spec.k = j.at("k").get<int>();
  const auto& ab = j.at("ablation");
  spec.ablation.drop_degree = ab.at("drop_degree").get<bool>();
  spec.ablation.drop_node_level = ab.at("drop_node_level").get<bool>();
  spec.ablation.drop_graph_level = ab.at("drop_graph_level").get<bool>();
  spec.ablation.drop_distance = ab.at("drop_distance").get<bool>();
  spec.ablation.no_encoding = ab.at("no_encoding").get<bool>();
  const auto& w = j.at("widths");
  spec.intrinsic_width = w.at("intrinsic").get<std::size_t>();
  spec.distance_width = w.at("distance").get<std::size_t>();
  spec.structure_width = w.at("structure").get<std::size_t>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  return spec;
}

}  // namespace dhse
