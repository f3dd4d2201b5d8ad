#pragma once

#include <cmath>
#include <vector>

#include "dhse/graph.hpp"
#include "dhse/matrix.hpp"

namespace dhse {

// S = D^{-1/2} A D^{-1/2} over the undirected simple graph with self-loops
// dropped. Isolated nodes (and nodes whose only edge is a self-loop) get
// all-zero rows, so the operator stays well-defined without special cases.
struct NormalizedAdjacency {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> targets;
  std::vector<double> values;

  std::size_t num_nodes() const { return offsets.empty() ? 0 : offsets.size() - 1; }

  static NormalizedAdjacency build(const Graph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<double> deg(n, 0.0);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v : g.undirected().neighbors(u)) {
        if (v != u) deg[u] += 1.0;
      }
    }
    NormalizedAdjacency s;
    s.offsets.assign(n + 1, 0);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v : g.undirected().neighbors(u)) {
        if (v == u) continue;
        s.targets.push_back(v);
        s.values.push_back(1.0 / std::sqrt(deg[u] * deg[v]));
      }
      s.offsets[u + 1] = s.targets.size();
    }
    return s;
  }

  // S * X
  Matrix multiply(const Matrix& x) const {
    Matrix y(num_nodes(), x.cols());
    for (NodeId i = 0; i < num_nodes(); ++i) {
      double* yi = y.row(i);
      for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) {
        const double v = values[e];
        const double* xj = x.row(targets[e]);
        for (std::size_t c = 0; c < x.cols(); ++c) yi[c] += v * xj[c];
      }
    }
    return y;
  }

  Matrix to_dense() const {
    Matrix d(num_nodes(), num_nodes());
    for (NodeId i = 0; i < num_nodes(); ++i) {
      for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) d(i, targets[e]) = values[e];
    }
    return d;
  }
};

}  // namespace dhse
