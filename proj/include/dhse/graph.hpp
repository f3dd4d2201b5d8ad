#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dhse/error.hpp"

namespace dhse {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Compressed sparse rows. Neighbor lists are sorted ascending, which makes
// edge lookup a binary search and triangle counting a sorted merge.
struct Csr {
  std::vector<std::size_t> offsets;  // num_nodes + 1 entries
  std::vector<NodeId> targets;

  std::size_t num_nodes() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t num_entries() const { return targets.size(); }
  std::size_t degree(NodeId u) const { return offsets[u + 1] - offsets[u]; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {targets.data() + offsets[u], targets.data() + offsets[u + 1]};
  }

  bool has_edge(NodeId u, NodeId v) const {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  bool operator==(const Csr&) const = default;
};

// Deduplicates and sorts the edge set, then packs it.
inline Csr build_csr(std::size_t num_nodes, std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Csr csr;
  csr.offsets.assign(num_nodes + 1, 0);
  for (const auto& [u, v] : edges) ++csr.offsets[u + 1];
  std::partial_sum(csr.offsets.begin(), csr.offsets.end(), csr.offsets.begin());
  csr.targets.resize(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) csr.targets[i] = edges[i].second;
  return csr;
}

// Immutable graph over 0-based integer node ids. Holds the directed CSR of
// out-edges and the symmetrized simple undirected CSR. Parallel edges are
// deduplicated at construction; self-loops are kept (one entry per view).
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(std::size_t num_nodes, const std::vector<Edge>& edges) {
    for (const auto& [u, v] : edges) {
      if (u >= num_nodes || v >= num_nodes) {
        throw ValidationError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                              ") out of range for " + std::to_string(num_nodes) + " nodes");
      }
    }
    Graph g;
    g.directed_ = build_csr(num_nodes, edges);
    std::vector<Edge> sym;
    sym.reserve(edges.size() * 2);
    for (const auto& [u, v] : edges) {
      sym.emplace_back(u, v);
      if (u != v) sym.emplace_back(v, u);
    }
    g.undirected_ = build_csr(num_nodes, std::move(sym));
    g.self_loop_.assign(num_nodes, 0);
    g.in_degree_.assign(num_nodes, 0);
    for (NodeId u = 0; u < num_nodes; ++u) {
      for (NodeId v : g.directed_.neighbors(u)) {
        ++g.in_degree_[v];
        if (v == u) g.self_loop_[u] = 1;
      }
    }
    return g;
  }

  // Text edge list: one whitespace-separated "u v" pair per line, 0-based
  // ids; blank lines and lines starting with '#' are ignored. When num_nodes
  // is not given it is inferred as max id + 1.
  static Graph load_edge_list(const std::string& path,
                              std::optional<std::size_t> num_nodes = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge list: " + path);
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    std::size_t max_id = 0;
    bool any = false;
    while (std::getline(in, line)) {
      ++line_no;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      std::istringstream fields(line);
      long long u = -1, v = -1;
      std::string extra;
      if (!(fields >> u >> v) || (fields >> extra) || u < 0 || v < 0 ||
          u > std::numeric_limits<NodeId>::max() || v > std::numeric_limits<NodeId>::max()) {
        throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed edge line: '" +
                              line + "'");
      }
      if (num_nodes && (static_cast<std::size_t>(u) >= *num_nodes ||
                        static_cast<std::size_t>(v) >= *num_nodes)) {
        throw ValidationError(path + ":" + std::to_string(line_no) + ": node id exceeds declared " +
                              std::to_string(*num_nodes) + " nodes");
      }
      edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
      max_id = std::max({max_id, static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
      any = true;
    }
    const std::size_t n = num_nodes ? *num_nodes : (any ? max_id + 1 : 0);
    return from_edges(n, edges);
  }

  std::size_t num_nodes() const { return directed_.num_nodes(); }
  const Csr& directed() const { return directed_; }
  const Csr& undirected() const { return undirected_; }
  bool has_self_loop(NodeId v) const { return self_loop_[v] != 0; }
  std::size_t out_degree(NodeId v) const { return directed_.degree(v); }
  std::size_t in_degree(NodeId v) const { return in_degree_[v]; }

 private:
  Csr directed_;
  Csr undirected_;
  std::vector<std::size_t> in_degree_;
  std::vector<char> self_loop_;
};

struct Degrees {
  std::vector<std::int64_t> in;
  std::vector<std::int64_t> out;
};

inline Degrees degrees(const Graph& g) {
  Degrees d;
  d.in.reserve(g.num_nodes());
  d.out.reserve(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    d.in.push_back(static_cast<std::int64_t>(g.in_degree(v)));
    d.out.push_back(static_cast<std::int64_t>(g.out_degree(v)));
  }
  return d;
}

// Induced subgraph of all nodes within hop radius of a center, with the hop
// distance of every member. Local ids follow ascending global id order.
struct EgoNet {
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  NodeId center = 0;        // global id
  NodeId center_local = 0;  // local id of the center
  int radius = 0;
  std::vector<NodeId> nodes;  // sorted global ids
  Csr adj;                    // induced edges over local ids
  std::vector<int> dist;      // hops from center, per local id

  std::size_t size() const { return nodes.size(); }

  std::size_t local_of(NodeId global) const {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), global);
    if (it == nodes.end() || *it != global) return npos;
    return static_cast<std::size_t>(it - nodes.begin());
  }
};

// BFS over the undirected view. Self-loops never expand the frontier but are
// kept in the induced adjacency. An isolated center yields a 1-node net.
inline EgoNet extract_ego_net(const Graph& g, NodeId center, int radius) {
  if (center >= g.num_nodes()) throw ValidationError("ego-net center out of range");
  if (radius < 1) throw ValidationError("ego-net radius must be >= 1");

  std::unordered_map<NodeId, int> dist_of;
  dist_of.emplace(center, 0);
  std::vector<NodeId> frontier{center};
  std::vector<NodeId> next;
  std::vector<NodeId> members{center};
  for (int d = 1; d <= radius && !frontier.empty(); ++d) {
    next.clear();
    for (NodeId u : frontier) {
      for (NodeId v : g.undirected().neighbors(u)) {
        if (v == u) continue;
        if (dist_of.emplace(v, d).second) {
          next.push_back(v);
          members.push_back(v);
        }
      }
    }
    std::swap(frontier, next);
  }

  EgoNet net;
  net.center = center;
  net.radius = radius;
  std::sort(members.begin(), members.end());
  net.nodes = std::move(members);
  net.center_local = static_cast<NodeId>(net.local_of(center));
  net.dist.resize(net.nodes.size());
  for (std::size_t i = 0; i < net.nodes.size(); ++i) net.dist[i] = dist_of.at(net.nodes[i]);

  net.adj.offsets.assign(net.nodes.size() + 1, 0);
  std::vector<NodeId> induced;
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    for (NodeId v : g.undirected().neighbors(net.nodes[i])) {
      const std::size_t local = net.local_of(v);
      if (local != EgoNet::npos) induced.push_back(static_cast<NodeId>(local));
    }
    net.adj.offsets[i + 1] = induced.size();
  }
  net.adj.targets = std::move(induced);
  return net;
}

}  // namespace dhse
