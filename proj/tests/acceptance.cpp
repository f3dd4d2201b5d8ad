// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure. Oracles come from test_util.hpp and are independent of the
// library's implementation paths.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dhse/arxiv_ingest.hpp"
#include "dhse/correct_smooth.hpp"
#include "dhse/distance_features.hpp"
#include "dhse/nn/trainer.hpp"
#include "dhse/pipeline.hpp"
#include "dhse/structure_features.hpp"
#include "dhse/synth.hpp"
#include "test_util.hpp"

namespace {

using dhse::distribution_stats;
using dhse::EgoNet;
using dhse::Graph;
using dhse::Matrix;
using dhse::NodeId;
using dhse::Rng;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// 1. structural indicators vs brute force
// ---------------------------------------------------------------------------

Outcome structural_oracles() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t checked = 0;

  std::vector<Graph> graphs;
  // named small graphs: K3, K4, P3, S3, C4
  graphs.push_back(Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}));
  graphs.push_back(Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  graphs.push_back(Graph::from_edges(3, {{0, 1}, {1, 2}}));
  graphs.push_back(Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}}));
  graphs.push_back(Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
  for (std::uint64_t g = 0; g < 100; ++g) {
    const std::size_t n = 4 + g % 27;  // up to 30 nodes
    graphs.push_back(testutil::random_gnp(n, 0.3, 5000 + g));
  }

  for (const Graph& g : graphs) {
    for (NodeId center = 0; center < g.num_nodes(); ++center) {
      for (int r = 1; r <= 2; ++r) {
        const EgoNet net = extract_ego_net(g, center, r);
        const auto dense = testutil::DenseGraph::from_ego_net(net);
        const NodeId c = net.center_local;
        worst = std::max(worst, std::abs(static_cast<double>(count_triangles(net, c)) -
                                         static_cast<double>(testutil::brute_triangles(dense, c))));
        worst = std::max(worst,
                         std::abs(clustering(net, c) - testutil::brute_clustering(dense, c)));
        worst = std::max(worst, std::abs(square_clustering(net, c) -
                                         testutil::brute_square_clustering(dense, c)));
        const auto gl = graph_level(net);
        const auto bgl = testutil::brute_graph_level(dense);
        worst = std::max(worst, std::abs(gl.density - bgl.density));
        worst = std::max(worst, std::abs(gl.self_loops - bgl.self_loops));
        worst = std::max(worst, std::abs(gl.transitivity - bgl.transitivity));
        ++checked;
      }
    }
  }

  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << checked << " ego-nets on " << graphs.size() << " graphs, max |err| " << worst
         << ", " << elapsed << " s";
  return {worst <= 1e-12 && elapsed < 10.0, detail.str()};
}

// ---------------------------------------------------------------------------
// 2. distance statistics vs the second two-pass implementation
// ---------------------------------------------------------------------------

Outcome distance_statistics() {
  Rng rng(424242);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> seq;
    const std::size_t n = rng.index(60);
    for (std::size_t i = 0; i < n; ++i) seq.push_back(static_cast<double>(rng.index(9)));
    const auto got = distribution_stats(seq).as_array();
    const auto expected = testutil::oracle_distribution_stats(seq);
    for (std::size_t i = 0; i < got.size(); ++i) {
      worst = std::max(worst, std::abs(got[i] - expected[i]));
    }
  }
  // documented degenerate cases
  bool degenerate_ok = true;
  for (double v : distribution_stats(std::span<const double>{}).as_array()) {
    degenerate_ok = degenerate_ok && v == 0.0;
  }
  const std::vector<double> constant{2, 2, 2};
  const auto cs = distribution_stats(constant);
  degenerate_ok = degenerate_ok && cs.std_dev == 0.0 && cs.kurtosis == 0.0 &&
                  cs.skewness == 0.0 && cs.mean == 2.0;

  std::ostringstream detail;
  detail << "1000 random sequences, max |err| " << worst << ", degenerate cases "
         << (degenerate_ok ? "ok" : "WRONG");
  return {worst <= 1e-12 && degenerate_ok, detail.str()};
}

// ---------------------------------------------------------------------------
// 3. analytic vs finite-difference gradients, full models
// ---------------------------------------------------------------------------

Outcome gradient_suite() {
  const auto start = Clock::now();
  double worst = 0.0;
  int instances = 0;
  for (std::uint64_t trial = 0; trial < 22; ++trial) {
    Rng rng(9000 + trial * 17);
    const std::size_t n = 6 + trial % 7;  // up to 12 nodes
    const Graph g = testutil::random_gnp(n, 0.35, 7000 + trial);
    const auto ctx = dhse::GraphContext::build(g);

    dhse::FeatureInputs feats;
    feats.intrinsic = Matrix(n, 4);
    feats.distance = Matrix(n, 3);
    feats.structure = Matrix(n, 5);
    for (double& v : feats.intrinsic.data()) v = rng.normal();
    for (double& v : feats.distance.data()) v = rng.normal();
    for (double& v : feats.structure.data()) v = rng.normal();
    std::vector<int> labels(n, 0);
    for (auto& l : labels) l = static_cast<int>(rng.index(3));
    std::vector<NodeId> train_rows;
    for (NodeId i = 0; i < n; ++i) train_rows.push_back(i);

    dhse::ModelConfig cfg;
    cfg.kind = trial % 2 == 0 ? dhse::ModelKind::gat : dhse::ModelKind::agdn;
    cfg.layers = 2;
    cfg.heads = 2;
    cfg.hidden = static_cast<int>(4 + trial % 5);  // up to 8
    cfg.diffusion = 2;
    cfg.transition = trial % 4 == 1 ? dhse::AgdnTransition::norm_adj
                                    : dhse::AgdnTransition::attention;
    cfg.num_classes = 3;
    dhse::DhseModel model(cfg, 4, 3, 5, 100 + trial);

    const auto loss = [&] {
      dhse::ModelTape tape;
      const auto out = model.forward(feats, ctx, tape);
      return cross_entropy(out.logits, labels, train_rows);
    };
    model.zero_grad();
    dhse::ModelTape tape;
    const auto out = model.forward(feats, ctx, tape);
    const Matrix grad = cross_entropy_grad(out.probs, labels, train_rows);
    model.backward(feats, ctx, tape, grad);
    auto params = model.params();
    worst = std::max(worst, testutil::max_grad_rel_err(params, loss));
    ++instances;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << instances << " instances (gat+agdn, encoder+head), max rel err " << worst << ", "
         << elapsed << " s";
  return {worst < 1e-4 && elapsed < 60.0, detail.str()};
}

// ---------------------------------------------------------------------------
// 4. attention rows and hop weights are normalized
// ---------------------------------------------------------------------------

Outcome attention_normalization() {
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    Rng rng(3100 + trial);
    const std::size_t n = 8 + trial * 3;
    const Graph g = testutil::random_gnp(n, 0.25, 400 + trial);
    const auto adj = dhse::add_self_loops(g.undirected());
    const auto norm = dhse::NormalizedAdjacency::build(g);

    Matrix x(n, 5);
    for (double& v : x.data()) v = rng.normal();

    dhse::GatLayer gat(5, 6, 3, rng);
    dhse::GatLayerCache gat_cache;
    gat.forward(x, adj, gat_cache);
    for (const auto& head : gat_cache.heads) {
      for (NodeId i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) sum += head.att.alpha[e];
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }

    dhse::AgdnLayer agdn(5, 6, 3, rng);
    dhse::AgdnCache agdn_cache;
    agdn.forward(x, adj, norm, agdn_cache);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t k = 0; k <= 3; ++k) sum += agdn_cache.hop_theta(i, k);
      worst = std::max(worst, std::abs(sum - 1.0));
      double tsum = 0.0;
      for (std::size_t e = adj.offsets[i]; e < adj.offsets[i + 1]; ++e) {
        tsum += agdn_cache.att.alpha[e];
      }
      worst = std::max(worst, std::abs(tsum - 1.0));
    }
  }
  std::ostringstream detail;
  detail << "max |row sum - 1| = " << worst;
  return {worst <= 1e-9, detail.str()};
}

// ---------------------------------------------------------------------------
// 5. fixed points vs dense linear solves on graphs of <= 10 nodes
// ---------------------------------------------------------------------------

Outcome cs_linear_solve_oracle() {
  double worst = 0.0;
  std::size_t solved = 0;
  std::vector<Graph> graphs;
  graphs.push_back(Graph::from_edges(2, {{0, 1}}));
  graphs.push_back(Graph::from_edges(3, {{0, 1}, {1, 2}}));
  graphs.push_back(Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
  graphs.push_back(Graph::from_edges(5, {}));                      // edgeless
  graphs.push_back(Graph::from_edges(3, {{0, 0}, {0, 1}, {1, 2}}));  // self-loop present
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    graphs.push_back(testutil::random_gnp(2 + seed % 9, 0.4, 600 + seed));
  }

  Rng rng(11000);
  for (const Graph& g : graphs) {
    const auto s = dhse::NormalizedAdjacency::build(g);
    const Matrix s_dense = s.to_dense();
    Matrix b(g.num_nodes(), 4);
    for (double& v : b.data()) v = rng.normal();
    for (const double alpha : {0.8, 0.9}) {
      const Matrix iterated = dhse::spread(b, s, alpha, 5000, 1e-13);
      const Matrix direct = testutil::dense_fixed_point(s_dense, b, alpha);
      worst = std::max(worst, max_abs_diff(iterated, direct));
      ++solved;
    }
  }
  std::ostringstream detail;
  detail << solved << " solves over " << graphs.size() << " graphs, max |err| " << worst;
  return {worst <= 1e-8, detail.str()};
}

// ---------------------------------------------------------------------------
// 6. near-linear extraction scaling on ~8-regular graphs
// ---------------------------------------------------------------------------

Graph random_regular8(std::size_t n, std::uint64_t seed) {
  // union of four random permutations: every node gains two endpoints per
  // permutation, so degrees are 8 minus the rare collision/self-map
  Rng rng(seed);
  std::vector<dhse::Edge> edges;
  edges.reserve(4 * n);
  std::vector<NodeId> perm(n);
  for (int p = 0; p < 4; ++p) {
    for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<NodeId>(i);
    rng.shuffle(perm);
    for (std::size_t i = 0; i < n; ++i) {
      if (perm[i] != i) edges.emplace_back(static_cast<NodeId>(i), perm[i]);
    }
  }
  return Graph::from_edges(n, edges);
}

double time_extraction(const Graph& g) {
  double best = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 2; ++rep) {
    const auto start = Clock::now();
    const Matrix s = structure_matrix(g, 2, 1);
    const Matrix d = distance_matrix(g, 2, 1);
    best = std::min(best, seconds_since(start));
    if (s.rows() != d.rows()) std::abort();  // keep the work observable
  }
  return best;
}

Outcome extraction_scaling() {
  const Graph g10 = random_regular8(10000, 81);
  const Graph g20 = random_regular8(20000, 82);
  const Graph g40 = random_regular8(40000, 83);
  time_extraction(g10);  // warm caches and the allocator
  const double t10 = time_extraction(g10);
  const double t20 = time_extraction(g20);
  const double t40 = time_extraction(g40);
  const double r1 = t20 / t10;
  const double r2 = t40 / t20;
  std::ostringstream detail;
  detail << "t(10k) " << t10 << " s, t(20k) " << t20 << " s, t(40k) " << t40
         << " s; ratios " << r1 << ", " << r2;
  return {r1 <= 2.5 && r2 <= 2.5, detail.str()};
}

// ---------------------------------------------------------------------------
// 7. end-to-end desk-scale experiment, 10 seeds
// ---------------------------------------------------------------------------

Outcome end_to_end() {
  const auto start = Clock::now();
  std::vector<double> base_accs, cs_accs;
  double min_train = 1.0;

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    dhse::SynthConfig synth_cfg;
    synth_cfg.nodes = 1000;
    synth_cfg.classes = 4;
    synth_cfg.p_in = 0.05;
    synth_cfg.p_out = 0.005;
    synth_cfg.feature_dim = 16;
    synth_cfg.feature_noise = 5.0;  // graph signal must matter, not just features
    synth_cfg.seed = 1000 + seed;
    const dhse::SynthData data = make_planted_partition(synth_cfg);
    const Graph g = Graph::from_edges(data.num_nodes, data.edges);

    const int k = 2;
    const auto extracted = dhse::extract_features(g, k, 0);
    const dhse::FeatureInputs inputs =
        assemble_inputs(data.features, extracted.structure, extracted.distance, k, {});
    const auto ctx = dhse::GraphContext::build(g);

    dhse::ModelConfig cfg;
    cfg.kind = dhse::ModelKind::agdn;
    cfg.num_classes = synth_cfg.classes;
    dhse::DhseModel model(cfg, inputs.intrinsic.cols(), inputs.distance.cols(),
                          inputs.structure.cols(), seed);
    dhse::TrainConfig tc;
    tc.epochs = 150;
    tc.lr = 0.01;
    tc.seed = seed;
    const auto result = train_model(model, inputs, ctx, data.labels, data.split, tc);
    min_train = std::min(min_train, result.final_epoch().train_accuracy);

    const double base = accuracy(result.final_output.probs, data.labels, data.split.test);
    base_accs.push_back(base);

    dhse::LabelState state;
    state.z = result.final_output.probs;
    state.labels = data.labels;
    state.partition = data.split;
    state.num_classes = synth_cfg.classes;
    const auto s = dhse::NormalizedAdjacency::build(g);
    const Matrix smoothed = correct_and_smooth(state, s, dhse::CsConfig{});
    const auto pred = predict(smoothed);
    std::size_t hits = 0;
    for (NodeId i : data.split.test) hits += pred[i] == data.labels[i] ? 1 : 0;
    cs_accs.push_back(static_cast<double>(hits) /
                      static_cast<double>(data.split.test.size()));
  }

  double base_mean = 0.0, cs_mean = 0.0;
  for (double a : base_accs) base_mean += a;
  for (double a : cs_accs) cs_mean += a;
  base_mean /= static_cast<double>(base_accs.size());
  cs_mean /= static_cast<double>(cs_accs.size());
  const double elapsed = seconds_since(start);

  std::ostringstream detail;
  detail << "10 seeds: min train acc " << min_train << ", mean test acc " << base_mean
         << " base vs " << cs_mean << " with C&S, " << elapsed << " s";
  const bool pass = min_train > 0.95 && cs_mean >= base_mean && elapsed < 600.0;
  return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// 8. explicit non-reproducibility statement + ingest path existence
// ---------------------------------------------------------------------------

Outcome non_reproducibility() {
  std::cout << "    note: published ogbn-arxiv accuracies for this method (e.g. DHSEAGDN with\n"
               "    correct-and-smooth, test 0.7439 +/- 0.0019) are NOT reproduced at desk\n"
               "    scale; they need the full dataset and long GPU training. The ingest-arxiv\n"
               "    path converts the raw files for users who have them; no accuracy gate is\n"
               "    attached to it.\n";
  // prove the ingest path exists and produces a loadable dataset
  const auto dir = std::filesystem::temp_directory_path() /
                   ("dhse_accept_" + std::to_string(::getpid()));
  const auto raw = dir / "raw";
  std::filesystem::create_directories(raw);
  const auto write = [&](const char* name, const char* content) {
    std::ofstream out(raw / name);
    out << content;
  };
  write("edge.csv", "0,1\n1,2\n2,3\n3,0\n");
  write("node-feat.csv", "1,0\n0,1\n1,1\n0,0\n");
  write("node-label.csv", "0\n1\n0\n1\n");
  write("train.csv", "0\n1\n");
  write("valid.csv", "2\n");
  write("test.csv", "3\n");
  bool ok = false;
  std::string note;
  try {
    const auto paths = dhse::ingest_arxiv(raw.string(), (dir / "out").string());
    const auto ds = dhse::load_dataset(paths);
    ok = ds.graph.num_nodes() == 4 && ds.num_classes == 2;
    note = "ingest-arxiv path produces a loadable dataset";
  } catch (const std::exception& e) {
    note = std::string("ingest failed: ") + e.what();
  }
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  return {ok, note};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1. structural indicators match brute-force oracles (<= 1e-12, < 10 s)",
       structural_oracles},
      {"2. distance statistics match the independent two-pass oracle (<= 1e-12)",
       distance_statistics},
      {"3. analytic gradients match central differences (< 1e-4, < 60 s)", gradient_suite},
      {"4. attention rows and hop weights sum to 1 (+/- 1e-9)", attention_normalization},
      {"5. fixed points match dense solves on <= 10-node graphs (<= 1e-8)",
       cs_linear_solve_oracle},
      {"6. extraction time grows <= 2.5x per doubling on ~8-regular graphs",
       extraction_scaling},
      {"7. end-to-end: train acc > 0.95, mean C&S >= base, < 10 min", end_to_end},
      {"8. non-reproducibility statement + ingest path", non_reproducibility},
  };

  bool all_pass = true;
  for (const auto& criterion : criteria) {
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && outcome.pass;
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << criterion.name << "\n       "
              << outcome.detail << "\n";
  }
  std::cout << (all_pass ? "acceptance: all criteria passed\n"
                         : "acceptance: FAILURES present\n");
  return all_pass ? 0 : 1;
}
