#pragma once

#include <cstdint>
#include <vector>

#include "dhse/graph.hpp"
#include "dhse/matrix.hpp"
#include "dhse/parallel.hpp"

namespace dhse {

namespace detail {

// Degree ignoring a self-loop entry.
inline std::size_t simple_degree(const EgoNet& net, NodeId v) {
  return net.adj.degree(v) - (net.adj.has_edge(v, v) ? 1 : 0);
}

}  // namespace detail

// Number of unordered neighbor pairs {u, w} of v that are themselves
// adjacent. Self-loops are ignored. Sorted-merge intersection keeps the cost
// at O(deg^2) per node for bounded degree.
inline std::int64_t count_triangles(const EgoNet& net, NodeId v) {
  const auto nv = net.adj.neighbors(v);
  std::int64_t count = 0;
  for (NodeId u : nv) {
    if (u == v) continue;
    const auto nu = net.adj.neighbors(u);
    auto it1 = std::upper_bound(nv.begin(), nv.end(), u);
    auto it2 = std::upper_bound(nu.begin(), nu.end(), u);
    while (it1 != nv.end() && it2 != nu.end()) {
      if (*it1 < *it2) {
        ++it1;
      } else if (*it2 < *it1) {
        ++it2;
      } else {
        if (*it1 != v) ++count;
        ++it1;
        ++it2;
      }
    }
  }
  return count;
}

// 2T(v) / (deg(v) * (deg(v) - 1)); 0 when deg(v) < 2.
inline double clustering(const EgoNet& net, NodeId v) {
  const std::size_t deg = detail::simple_degree(net, v);
  if (deg < 2) return 0.0;
  const double t = static_cast<double>(count_triangles(net, v));
  return 2.0 * t / (static_cast<double>(deg) * static_cast<double>(deg - 1));
}

// Fraction of potential squares through v that are realized:
//   sum_{u<w} q_v(u,w) / sum_{u<w} (a_v(u,w) + q_v(u,w))
// with q_v(u,w) the common neighbors of u and w other than v, and
//   a_v(u,w) = (k_u - 1 - q - theta) + (k_w - 1 - q - theta),
// theta = 1 iff u and w are adjacent. 0 when deg(v) < 2 or the denominator
// vanishes.
inline double square_clustering(const EgoNet& net, NodeId v) {
  std::vector<NodeId> nv;
  for (NodeId u : net.adj.neighbors(v)) {
    if (u != v) nv.push_back(u);
  }
  if (nv.size() < 2) return 0.0;
  double numer = 0.0, denom = 0.0;
  for (std::size_t a = 0; a < nv.size(); ++a) {
    const NodeId u = nv[a];
    const auto nu = net.adj.neighbors(u);
    for (std::size_t b = a + 1; b < nv.size(); ++b) {
      const NodeId w = nv[b];
      const auto nw = net.adj.neighbors(w);
      // q = |N(u) ∩ N(w)| excluding v and any self-loop entries.
      std::int64_t q = 0;
      auto it1 = nu.begin();
      auto it2 = nw.begin();
      while (it1 != nu.end() && it2 != nw.end()) {
        if (*it1 < *it2) {
          ++it1;
        } else if (*it2 < *it1) {
          ++it2;
        } else {
          if (*it1 != v && *it1 != u && *it1 != w) ++q;
          ++it1;
          ++it2;
        }
      }
      const double theta = net.adj.has_edge(u, w) ? 1.0 : 0.0;
      const double ku = static_cast<double>(detail::simple_degree(net, u));
      const double kw = static_cast<double>(detail::simple_degree(net, w));
      const double qa = static_cast<double>(q);
      const double av = (ku - 1.0 - qa - theta) + (kw - 1.0 - qa - theta);
      numer += qa;
      denom += qa + av;
    }
  }
  return denom > 0.0 ? numer / denom : 0.0;
}

struct GraphLevelStats {
  double density = 0.0;
  double self_loops = 0.0;
  double transitivity = 0.0;
};

// Density 2m/(n(n-1)) and transitivity 3*#triangles/#triads of the induced
// net, plus its self-loop count. m excludes self-loops; a triad is a path of
// two edges sharing a vertex.
inline GraphLevelStats graph_level(const EgoNet& net) {
  GraphLevelStats out;
  const std::size_t n = net.size();
  std::size_t loops = 0;
  std::int64_t triangles3 = 0;  // each triangle counted once per corner
  double triads = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    if (net.adj.has_edge(v, v)) ++loops;
    const auto deg = static_cast<double>(detail::simple_degree(net, v));
    triads += deg * (deg - 1.0) / 2.0;
    triangles3 += count_triangles(net, v);
  }
  out.self_loops = static_cast<double>(loops);
  const double m = static_cast<double>(net.adj.num_entries() - loops) / 2.0;
  if (n >= 2) {
    out.density = 2.0 * m / (static_cast<double>(n) * static_cast<double>(n - 1));
  }
  if (triads > 0.0) out.transitivity = static_cast<double>(triangles3) / triads;
  return out;
}

inline constexpr std::size_t structure_width(int k) {
  return 6 * static_cast<std::size_t>(k) + 2;
}

// Structural indicator block of one node. Layout:
//   [in_deg, out_deg, (tri, clust, sq_clust, density, loops, trans) for r=1..k]
// Node-level indicators are evaluated for the center within each r-hop
// ego-net; graph-level indicators describe the whole net.
inline std::vector<double> structure_vector(const Graph& g, NodeId v, int k) {
  if (k < 1) throw ValidationError("hop count k must be >= 1");
  std::vector<double> out;
  out.reserve(structure_width(k));
  out.push_back(static_cast<double>(g.in_degree(v)));
  out.push_back(static_cast<double>(g.out_degree(v)));
  for (int r = 1; r <= k; ++r) {
    const EgoNet net = extract_ego_net(g, v, r);
    const NodeId c = net.center_local;
    out.push_back(static_cast<double>(count_triangles(net, c)));
    out.push_back(clustering(net, c));
    out.push_back(square_clustering(net, c));
    const GraphLevelStats gl = graph_level(net);
    out.push_back(gl.density);
    out.push_back(gl.self_loops);
    out.push_back(gl.transitivity);
  }
  return out;
}

inline Matrix structure_matrix(const Graph& g, int k, unsigned threads = 0) {
  Matrix m(g.num_nodes(), structure_width(k));
  parallel_for(g.num_nodes(), threads, [&](std::size_t v) {
    const auto row = structure_vector(g, static_cast<NodeId>(v), k);
    std::copy(row.begin(), row.end(), m.row(v));
  });
  return m;
}

}  // namespace dhse
