#include <catch2/catch_amalgamated.hpp>

#include "dhse/nn/agdn_layer.hpp"
#include "test_util.hpp"

using dhse::add_self_loops;
using dhse::AgdnCache;
using dhse::AgdnLayer;
using dhse::AgdnTransition;
using dhse::Graph;
using dhse::Matrix;
using dhse::NodeId;
using dhse::NormalizedAdjacency;
using dhse::Rng;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

struct Instance {
  Graph g;
  dhse::Csr adj;
  NormalizedAdjacency norm;
};

Instance make_instance(std::size_t n, double p, std::uint64_t seed) {
  Instance inst{testutil::random_gnp(n, p, seed), {}, {}};
  inst.adj = add_self_loops(inst.g.undirected());
  inst.norm = NormalizedAdjacency::build(inst.g);
  return inst;
}

}  // namespace

TEST_CASE("agdn forward contracts") {
  Rng rng(7);

  SECTION("depth 0 reduces to x W + x W_r") {
    const auto inst = make_instance(6, 0.4, 11);
    AgdnLayer layer(3, 4, 0, rng);
    const Matrix x = random_matrix(6, 3, rng);
    AgdnCache cache;
    const Matrix out = layer.forward(x, inst.adj, inst.norm, cache);
    Matrix expected = matmul(x, layer.weight);
    add_inplace(expected, matmul(x, layer.weight_res));
    CHECK(max_abs_diff(out, expected) < 1e-12);
    for (std::size_t i = 0; i < 6; ++i) CHECK(cache.hop_theta(i, 0) == 1.0);
  }

  SECTION("identity transition gives uniform hop weights") {
    // no edges: every attention row is the single self entry, so T = I
    const auto inst = make_instance(5, 0.0, 1);
    AgdnLayer layer(3, 4, 3, rng);
    const Matrix x = random_matrix(5, 3, rng);
    AgdnCache cache;
    layer.forward(x, inst.adj, inst.norm, cache);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t k = 0; k <= 3; ++k) {
        REQUIRE_THAT(cache.hop_theta(i, k), Catch::Matchers::WithinAbs(0.25, 1e-12));
      }
    }
  }

  SECTION("hop weights always sum to one") {
    const auto inst = make_instance(12, 0.3, 17);
    AgdnLayer layer(4, 5, 3, rng);
    const Matrix x = random_matrix(12, 4, rng);
    AgdnCache cache;
    layer.forward(x, inst.adj, inst.norm, cache);
    for (std::size_t i = 0; i < 12; ++i) {
      double sum = 0.0;
      for (std::size_t k = 0; k <= 3; ++k) sum += cache.hop_theta(i, k);
      REQUIRE_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
  }

  SECTION("zero projection leaves only the residual path") {
    const auto inst = make_instance(7, 0.4, 23);
    AgdnLayer layer(3, 4, 2, rng);
    layer.weight.fill(0.0);
    const Matrix x = random_matrix(7, 3, rng);
    AgdnCache cache;
    const Matrix out = layer.forward(x, inst.adj, inst.norm, cache);
    const Matrix expected = matmul(x, layer.weight_res);
    CHECK(max_abs_diff(out, expected) == 0.0);
  }

  SECTION("transition attention rows are row-stochastic") {
    const auto inst = make_instance(10, 0.3, 29);
    AgdnLayer layer(3, 4, 2, rng);
    const Matrix x = random_matrix(10, 3, rng);
    AgdnCache cache;
    layer.forward(x, inst.adj, inst.norm, cache);
    for (NodeId i = 0; i < 10; ++i) {
      double sum = 0.0;
      for (std::size_t e = inst.adj.offsets[i]; e < inst.adj.offsets[i + 1]; ++e) {
        sum += cache.att.alpha[e];
      }
      REQUIRE_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
  }
}

TEST_CASE("agdn layer is permutation equivariant") {
  Rng rng(41);
  const std::size_t n = 8;
  const Graph g = testutil::random_gnp(n, 0.35, 43);
  const auto adj = add_self_loops(g.undirected());
  const auto norm = NormalizedAdjacency::build(g);
  AgdnLayer layer(4, 4, 2, rng);
  const Matrix x = random_matrix(n, 4, rng);
  AgdnCache cache;
  const Matrix out = layer.forward(x, adj, norm, cache);

  std::vector<NodeId> perm(n);
  for (NodeId v = 0; v < n; ++v) perm[v] = static_cast<NodeId>((v * 3 + 1) % n);
  std::vector<dhse::Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.undirected().neighbors(u)) {
      if (u <= v) edges.emplace_back(perm[u], perm[v]);
    }
  }
  const Graph pg = Graph::from_edges(n, edges);
  const auto padj = add_self_loops(pg.undirected());
  const auto pnorm = NormalizedAdjacency::build(pg);
  Matrix px(n, 4);
  for (NodeId v = 0; v < n; ++v) {
    for (std::size_t j = 0; j < 4; ++j) px(perm[v], j) = x(v, j);
  }
  const Matrix pout = layer.forward(px, padj, pnorm, cache);
  for (NodeId v = 0; v < n; ++v) {
    for (std::size_t j = 0; j < 4; ++j) {
      REQUIRE_THAT(pout(perm[v], j), Catch::Matchers::WithinAbs(out(v, j), 1e-10));
    }
  }
}

TEST_CASE("agdn gradients match finite differences") {
  for (const auto transition : {AgdnTransition::attention, AgdnTransition::norm_adj}) {
    Rng rng(transition == AgdnTransition::attention ? 47 : 53);
    const auto inst = make_instance(7, 0.4, 59);
    AgdnLayer layer(3, 4, 3, rng, transition);
    const Matrix x = random_matrix(7, 3, rng);
    const Matrix probe = random_matrix(7, 4, rng);

    const auto loss = [&] {
      AgdnCache cache;
      const Matrix out = layer.forward(x, inst.adj, inst.norm, cache);
      double total = 0.0;
      for (std::size_t i = 0; i < out.size(); ++i) total += out.data()[i] * probe.data()[i];
      return total;
    };

    layer.zero_grad();
    AgdnCache cache;
    layer.forward(x, inst.adj, inst.norm, cache);
    layer.backward(x, inst.adj, inst.norm, probe, cache);

    std::vector<dhse::ParamRef> params;
    layer.collect_params("agdn", params);
    CHECK(testutil::max_grad_rel_err(params, loss) < 1e-4);
  }
}

TEST_CASE("agdn input gradients match finite differences") {
  Rng rng(61);
  const auto inst = make_instance(6, 0.4, 67);
  AgdnLayer layer(3, 3, 2, rng);
  Matrix x = random_matrix(6, 3, rng);
  const Matrix probe = random_matrix(6, 3, rng);

  layer.zero_grad();
  AgdnCache cache;
  layer.forward(x, inst.adj, inst.norm, cache);
  const Matrix grad_x = layer.backward(x, inst.adj, inst.norm, probe, cache);

  const double step = 1e-5;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x.data()[i];
    const auto eval = [&] {
      AgdnCache c;
      const Matrix out = layer.forward(x, inst.adj, inst.norm, c);
      double total = 0.0;
      for (std::size_t k = 0; k < out.size(); ++k) total += out.data()[k] * probe.data()[k];
      return total;
    };
    x.data()[i] = saved + step;
    const double up = eval();
    x.data()[i] = saved - step;
    const double down = eval();
    x.data()[i] = saved;
    worst = std::max(worst, testutil::rel_err((up - down) / (2 * step), grad_x.data()[i]));
  }
  CHECK(worst < 1e-4);
}
