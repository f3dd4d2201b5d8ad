#include <catch2/catch_amalgamated.hpp>

#include "dhse/nn/trainer.hpp"
#include "test_util.hpp"

using dhse::DhseModel;
using dhse::FeatureInputs;
using dhse::Graph;
using dhse::GraphContext;
using dhse::Matrix;
using dhse::ModelConfig;
using dhse::ModelKind;
using dhse::ModelTape;
using dhse::NodeId;
using dhse::Rng;
using dhse::Split;
using dhse::TrainConfig;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

struct SmallInstance {
  Graph g;
  GraphContext ctx;
  FeatureInputs feats;
  std::vector<int> labels;
  Split split;
};

SmallInstance make_instance(std::size_t n, int classes, std::uint64_t seed) {
  SmallInstance inst{testutil::random_gnp(n, 0.35, seed), {}, {}, {}, {}};
  inst.ctx = GraphContext::build(inst.g);
  Rng rng(seed + 1);
  inst.feats.intrinsic = random_matrix(n, 5, rng);
  inst.feats.distance = random_matrix(n, 3, rng);
  inst.feats.structure = random_matrix(n, 4, rng);
  for (std::size_t i = 0; i < n; ++i) {
    inst.labels.push_back(static_cast<int>(rng.index(static_cast<std::uint64_t>(classes))));
  }
  for (NodeId i = 0; i < n; ++i) {
    if (i % 3 == 0) inst.split.valid.push_back(i);
    else inst.split.train.push_back(i);
  }
  return inst;
}

ModelConfig small_config(ModelKind kind, int classes) {
  ModelConfig cfg;
  cfg.kind = kind;
  cfg.layers = 2;
  cfg.heads = 2;
  cfg.hidden = 6;
  cfg.diffusion = 2;
  cfg.num_classes = classes;
  return cfg;
}

}  // namespace

TEST_CASE("model output contracts") {
  const auto inst = make_instance(10, 3, 71);

  SECTION("probabilities are row-stochastic and shaped") {
    for (const auto kind : {ModelKind::gat, ModelKind::agdn}) {
      DhseModel model(small_config(kind, 3), 5, 3, 4, 7);
      ModelTape tape;
      const auto out = model.forward(inst.feats, inst.ctx, tape);
      REQUIRE(out.logits.rows() == 10);
      REQUIRE(out.logits.cols() == 3);
      for (std::size_t i = 0; i < 10; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
          sum += out.probs(i, j);
          REQUIRE(out.probs(i, j) >= 0.0);
          REQUIRE(out.probs(i, j) <= 1.0);
        }
        REQUIRE_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
      }
    }
  }

  SECTION("all-zero parameters give the uniform prediction") {
    DhseModel model(small_config(ModelKind::gat, 3), 5, 3, 4, 7);
    for (auto& p : model.params()) {
      for (double& v : p.value) v = 0.0;
    }
    ModelTape tape;
    const auto out = model.forward(inst.feats, inst.ctx, tape);
    for (std::size_t i = 0; i < out.probs.size(); ++i) {
      REQUIRE_THAT(out.probs.data()[i], Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));
    }
  }

  SECTION("argmax ties break to the lowest class") {
    Matrix m(1, 3);
    m(0, 0) = 0.4;
    m(0, 1) = 0.4;
    m(0, 2) = 0.2;
    CHECK(dhse::argmax_rows(m) == std::vector<int>{0});
  }
}

TEST_CASE("full-model gradients match finite differences") {
  // encoder + layers + head through the real loss, both model kinds
  for (const auto kind : {ModelKind::gat, ModelKind::agdn}) {
    const auto inst = make_instance(9, 3, kind == ModelKind::gat ? 73 : 79);
    ModelConfig cfg = small_config(kind, 3);
    cfg.hidden = 5;
    DhseModel model(cfg, 5, 3, 4, 11);
    auto params = model.params();

    const auto loss = [&] {
      ModelTape tape;
      const auto out = model.forward(inst.feats, inst.ctx, tape);
      return cross_entropy(out.logits, inst.labels, inst.split.train);
    };

    model.zero_grad();
    ModelTape tape;
    const auto out = model.forward(inst.feats, inst.ctx, tape);
    const Matrix grad = cross_entropy_grad(out.probs, inst.labels, inst.split.train);
    model.backward(inst.feats, inst.ctx, tape, grad);
    CHECK(testutil::max_grad_rel_err(params, loss) < 1e-4);
  }
}

TEST_CASE("no-encoding model consumes the raw concatenation") {
  const auto inst = make_instance(8, 2, 83);
  ModelConfig cfg = small_config(ModelKind::gat, 2);
  cfg.use_encoder = false;
  DhseModel model(cfg, 5, 3, 4, 13);
  ModelTape tape;
  const auto out = model.forward(inst.feats, inst.ctx, tape);
  CHECK(tape.input.cols() == 12);  // 5 + 3 + 4
  CHECK(out.probs.rows() == 8);

  // gradients still correct without the encoder
  auto params = model.params();
  const auto loss = [&] {
    ModelTape t;
    const auto o = model.forward(inst.feats, inst.ctx, t);
    return cross_entropy(o.logits, inst.labels, inst.split.train);
  };
  model.zero_grad();
  ModelTape t2;
  const auto o2 = model.forward(inst.feats, inst.ctx, t2);
  model.backward(inst.feats, inst.ctx, t2,
                 cross_entropy_grad(o2.probs, inst.labels, inst.split.train));
  CHECK(testutil::max_grad_rel_err(params, loss) < 1e-4);
}

TEST_CASE("training behaviour") {
  SECTION("separable two-class toy graph reaches full train accuracy") {
    // two 10-node cliques joined by one edge; features carry the class signal
    std::vector<dhse::Edge> edges;
    for (NodeId u = 0; u < 10; ++u) {
      for (NodeId v = u + 1; v < 10; ++v) {
        edges.emplace_back(u, v);
        edges.emplace_back(u + 10, v + 10);
      }
    }
    edges.emplace_back(9, 10);
    const Graph g = Graph::from_edges(20, edges);
    const GraphContext ctx = GraphContext::build(g);
    Rng rng(97);
    FeatureInputs feats;
    feats.intrinsic = Matrix(20, 4);
    for (NodeId i = 0; i < 20; ++i) {
      const double base = i < 10 ? 1.0 : -1.0;
      for (std::size_t j = 0; j < 4; ++j) feats.intrinsic(i, j) = base + 0.3 * rng.normal();
    }
    std::vector<int> labels(20, 0);
    for (NodeId i = 10; i < 20; ++i) labels[i] = 1;
    Split split;
    for (NodeId i = 0; i < 20; ++i) split.train.push_back(i);

    ModelConfig cfg = small_config(ModelKind::gat, 2);
    DhseModel model(cfg, 4, 0, 0, 17);
    TrainConfig tc;
    tc.epochs = 200;
    tc.lr = 0.02;
    const auto result = train_model(model, feats, ctx, labels, split, tc);
    CHECK(result.final_epoch().train_accuracy == 1.0);
  }

  SECTION("zero learning rate leaves parameters unchanged") {
    const auto inst = make_instance(8, 2, 89);
    DhseModel model(small_config(ModelKind::agdn, 2), 5, 3, 4, 19);
    std::vector<std::vector<double>> before;
    for (const auto& p : model.params()) before.emplace_back(p.value.begin(), p.value.end());
    TrainConfig tc;
    tc.epochs = 5;
    tc.lr = 0.0;
    train_model(model, inst.feats, inst.ctx, inst.labels, inst.split, tc);
    auto params = model.params();
    for (std::size_t p = 0; p < params.size(); ++p) {
      for (std::size_t i = 0; i < params[p].value.size(); ++i) {
        REQUIRE(params[p].value[i] == before[p][i]);
      }
    }
  }

  SECTION("same seed gives a bit-identical metric history") {
    const auto inst = make_instance(10, 3, 91);
    TrainConfig tc;
    tc.epochs = 20;
    DhseModel m1(small_config(ModelKind::gat, 3), 5, 3, 4, 23);
    DhseModel m2(small_config(ModelKind::gat, 3), 5, 3, 4, 23);
    const auto r1 = train_model(m1, inst.feats, inst.ctx, inst.labels, inst.split, tc);
    const auto r2 = train_model(m2, inst.feats, inst.ctx, inst.labels, inst.split, tc);
    REQUIRE(r1.history.size() == r2.history.size());
    for (std::size_t e = 0; e < r1.history.size(); ++e) {
      REQUIRE(r1.history[e].loss == r2.history[e].loss);
      REQUIRE(r1.history[e].train_accuracy == r2.history[e].train_accuracy);
      REQUIRE(r1.history[e].valid_accuracy == r2.history[e].valid_accuracy);
    }
  }

  SECTION("empty training set is rejected") {
    const auto inst = make_instance(6, 2, 93);
    DhseModel model(small_config(ModelKind::gat, 2), 5, 3, 4, 29);
    Split empty;
    TrainConfig tc;
    REQUIRE_THROWS_AS(train_model(model, inst.feats, inst.ctx, inst.labels, empty, tc),
                      dhse::ValidationError);
  }

  SECTION("non-finite loss aborts with a diagnostic") {
    auto inst = make_instance(8, 2, 99);
    inst.feats.intrinsic(0, 0) = std::numeric_limits<double>::infinity();
    DhseModel model(small_config(ModelKind::gat, 2), 5, 3, 4, 37);
    TrainConfig tc;
    tc.epochs = 3;
    REQUIRE_THROWS_MATCHES(train_model(model, inst.feats, inst.ctx, inst.labels, inst.split, tc),
                           dhse::DivergenceError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("epoch")));
  }
}

TEST_CASE("dropout only perturbs training forwards") {
  const auto inst = make_instance(9, 2, 95);
  ModelConfig cfg = small_config(ModelKind::gat, 2);
  cfg.dropout = 0.4;
  DhseModel model(cfg, 5, 3, 4, 31);
  ModelTape tape;
  const auto a = model.forward(inst.feats, inst.ctx, tape);
  const auto b = model.forward(inst.feats, inst.ctx, tape);
  CHECK(max_abs_diff(a.probs, b.probs) == 0.0);
  Rng drop_rng(1);
  const auto c = model.forward(inst.feats, inst.ctx, tape, true, &drop_rng);
  CHECK(max_abs_diff(a.probs, c.probs) > 0.0);
}
