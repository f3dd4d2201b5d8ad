#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "dhse/graph.hpp"
#include "dhse/matrix.hpp"
#include "dhse/parallel.hpp"

namespace dhse {

// Hop distances of every ego-net member except the center itself.
inline std::vector<double> distance_sequence(const EgoNet& net) {
  std::vector<double> seq;
  seq.reserve(net.size() > 0 ? net.size() - 1 : 0);
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (i == net.center_local) continue;
    seq.push_back(static_cast<double>(net.dist[i]));
  }
  return seq;
}

struct DistanceStats {
  double maximum = 0.0;
  double minimum = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;
  double kurtosis = 0.0;  // excess kurtosis, m4/m2^2 - 3
  double skewness = 0.0;  // m3/m2^1.5

  static constexpr std::size_t width = 7;

  std::array<double, width> as_array() const {
    return {maximum, minimum, median, mean, std_dev, kurtosis, skewness};
  }
};

// Population moments of the sequence. Median is the midpoint average for even
// lengths. All seven components are 0 for an empty sequence; skewness and
// kurtosis are 0 when the variance vanishes.
inline DistanceStats distribution_stats(std::span<const double> seq) {
  DistanceStats s;
  const std::size_t n = seq.size();
  if (n == 0) return s;

  std::vector<double> sorted(seq.begin(), seq.end());
  std::sort(sorted.begin(), sorted.end());
  s.minimum = sorted.front();
  s.maximum = sorted.back();
  s.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  double sum = 0.0;
  for (double x : seq) sum += x;
  s.mean = sum / static_cast<double>(n);

  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : seq) {
    const double d = x - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  s.std_dev = std::sqrt(m2);
  if (m2 > 0.0) {
    s.skewness = m3 / (m2 * std::sqrt(m2));
    s.kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return s;
}

inline constexpr std::size_t distance_width() { return DistanceStats::width; }

// Seven distance-distribution statistics of the k-hop ego-net around v.
inline std::array<double, DistanceStats::width> distance_vector(const Graph& g, NodeId v, int k) {
  const EgoNet net = extract_ego_net(g, v, k);
  const auto seq = distance_sequence(net);
  return distribution_stats(seq).as_array();
}

inline Matrix distance_matrix(const Graph& g, int k, unsigned threads = 0) {
  Matrix m(g.num_nodes(), DistanceStats::width);
  parallel_for(g.num_nodes(), threads, [&](std::size_t v) {
    const auto row = distance_vector(g, static_cast<NodeId>(v), k);
    std::copy(row.begin(), row.end(), m.row(v));
  });
  return m;
}

}  // namespace dhse
