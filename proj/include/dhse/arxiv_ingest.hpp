#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dhse/dataset.hpp"
#include "dhse/error.hpp"
#include "dhse/feature_matrix.hpp"

namespace dhse {

// Converts an ogbn-arxiv style raw directory into the toolkit's formats.
// Expects plain (un-gzipped) CSVs:
//   edge.csv        "src,dst" per line, 0-based ids
//   node-feat.csv   comma-separated floats per node
//   node-label.csv  one integer per node
//   train.csv / valid.csv / test.csv   one node id per line
// No downloader is bundled; users supply the files.
namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

inline std::vector<NodeId> load_csv_ids(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<NodeId> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ids.push_back(static_cast<NodeId>(std::stoull(line)));
  }
  return ids;
}

}  // namespace detail

inline DatasetPaths ingest_arxiv(const std::string& raw_dir, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const auto raw = [&](const char* name) { return (fs::path(raw_dir) / name).string(); };

  std::vector<Edge> edges;
  {
    std::ifstream in(raw("edge.csv"));
    if (!in) throw IoError("cannot open " + raw("edge.csv"));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto fields = detail::split_csv_line(line);
      if (fields.size() != 2) {
        throw ValidationError(raw("edge.csv") + ":" + std::to_string(line_no) +
                              ": expected 'src,dst'");
      }
      edges.emplace_back(static_cast<NodeId>(std::stoull(fields[0])),
                         static_cast<NodeId>(std::stoull(fields[1])));
    }
  }

  std::vector<std::vector<double>> feat_rows;
  {
    std::ifstream in(raw("node-feat.csv"));
    if (!in) throw IoError("cannot open " + raw("node-feat.csv"));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto fields = detail::split_csv_line(line);
      std::vector<double> row;
      row.reserve(fields.size());
      for (const auto& f : fields) row.push_back(std::stod(f));
      if (!feat_rows.empty() && row.size() != feat_rows.front().size()) {
        throw ValidationError("inconsistent feature width in node-feat.csv");
      }
      feat_rows.push_back(std::move(row));
    }
  }
  if (feat_rows.empty()) throw ValidationError("node-feat.csv is empty");

  const std::vector<int> labels = load_labels(raw("node-label.csv"));
  if (labels.size() != feat_rows.size()) {
    throw ValidationError("node-label.csv row count disagrees with node-feat.csv");
  }

  Matrix features(feat_rows.size(), feat_rows.front().size());
  for (std::size_t i = 0; i < feat_rows.size(); ++i) {
    std::copy(feat_rows[i].begin(), feat_rows[i].end(), features.row(i));
  }

  fs::create_directories(out_dir);
  const DatasetPaths paths = DatasetPaths::in_dir(out_dir);
  save_edge_list(paths.edges, edges);
  FeatureMatrix::from_matrix(features, "intrinsic").save(paths.features);
  save_labels(paths.labels, labels);
  save_ids(paths.train, detail::load_csv_ids(raw("train.csv")));
  save_ids(paths.valid, detail::load_csv_ids(raw("valid.csv")));
  save_ids(paths.test, detail::load_csv_ids(raw("test.csv")));
  return paths;
}

}  // namespace dhse
