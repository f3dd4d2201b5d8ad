#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "dhse/error.hpp"
#include "dhse/feature_matrix.hpp"
#include "dhse/graph.hpp"
#include "dhse/split.hpp"

namespace dhse {

// Labels file: one integer class id per line.
inline void save_labels(const std::string& path, std::span<const int> labels) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open labels file for writing: " + path);
  for (int label : labels) out << label << '\n';
  if (!out) throw IoError("failed writing labels file: " + path);
}

inline std::vector<int> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open labels file: " + path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      labels.push_back(std::stoi(line));
    } catch (const std::exception&) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed label");
    }
  }
  return labels;
}

// Split files: one node id per line.
inline void save_ids(const std::string& path, std::span<const NodeId> ids) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open id file for writing: " + path);
  for (NodeId id : ids) out << id << '\n';
  if (!out) throw IoError("failed writing id file: " + path);
}

inline std::vector<NodeId> load_ids(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open id file: " + path);
  std::vector<NodeId> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const long long v = std::stoll(line);
      if (v < 0) throw std::out_of_range("negative");
      ids.push_back(static_cast<NodeId>(v));
    } catch (const std::exception&) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed node id");
    }
  }
  return ids;
}

inline void save_edge_list(const std::string& path, std::span<const Edge> edges) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open edge list for writing: " + path);
  for (const auto& [u, v] : edges) out << u << '\t' << v << '\n';
  if (!out) throw IoError("failed writing edge list: " + path);
}

struct DatasetPaths {
  std::string edges;
  std::string features;  // intrinsic FeatureMatrix
  std::string labels;
  std::string train;
  std::string valid;
  std::string test;

  static DatasetPaths in_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    DatasetPaths p;
    p.edges = (fs::path(dir) / "edges.txt").string();
    p.features = (fs::path(dir) / "features.dhse").string();
    p.labels = (fs::path(dir) / "labels.txt").string();
    p.train = (fs::path(dir) / "train.txt").string();
    p.valid = (fs::path(dir) / "valid.txt").string();
    p.test = (fs::path(dir) / "test.txt").string();
    return p;
  }
};

struct Dataset {
  Graph graph;
  Matrix intrinsic;
  std::vector<int> labels;
  Split split;
  int num_classes = 0;
};

inline Dataset load_dataset(const DatasetPaths& paths) {
  Dataset ds;
  ds.graph = Graph::load_edge_list(paths.edges);
  const FeatureMatrix fm = FeatureMatrix::load(paths.features);
  ds.labels = load_labels(paths.labels);
  const std::size_t n = std::max(ds.graph.num_nodes(), static_cast<std::size_t>(fm.rows()));
  if (fm.rows() != n) {
    throw ValidationError("feature rows (" + std::to_string(fm.rows()) +
                          ") disagree with node count (" + std::to_string(n) + ")");
  }
  if (ds.graph.num_nodes() < n) {
    // edge list may omit trailing isolated nodes; rebuild with the full count
    std::vector<Edge> edges;
    for (NodeId u = 0; u < ds.graph.num_nodes(); ++u) {
      for (NodeId v : ds.graph.directed().neighbors(u)) edges.emplace_back(u, v);
    }
    ds.graph = Graph::from_edges(n, edges);
  }
  if (ds.labels.size() != n) {
    throw ValidationError("label count disagrees with node count");
  }
  ds.intrinsic = fm.to_matrix();
  ds.split.train = load_ids(paths.train);
  ds.split.valid = load_ids(paths.valid);
  ds.split.test = load_ids(paths.test);
  for (const auto* part : {&ds.split.train, &ds.split.valid, &ds.split.test}) {
    for (NodeId id : *part) {
      if (id >= n) throw ValidationError("split id " + std::to_string(id) + " out of range");
    }
  }
  int max_label = -1;
  for (int label : ds.labels) max_label = std::max(max_label, label);
  ds.num_classes = max_label + 1;
  return ds;
}

}  // namespace dhse
