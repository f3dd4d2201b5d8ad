// dhse: graph feature extraction, attention-model training, and
// correct-and-smooth post-processing over edge-list datasets.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dhse/arxiv_ingest.hpp"
#include "dhse/checkpoint.hpp"
#include "dhse/config_json.hpp"
#include "dhse/correct_smooth.hpp"
#include "dhse/dataset.hpp"
#include "dhse/pipeline.hpp"
#include "dhse/report.hpp"
#include "dhse/synth.hpp"

namespace {

using nlohmann::json;

template <typename T>
void set_if(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

json load_config_json(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      path = argv[i + 1];
      break;
    }
    if (arg.rfind("--config=", 0) == 0) {
      path = arg.substr(9);
      break;
    }
  }
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw dhse::IoError("cannot open config: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw dhse::ValidationError("bad config json: " + std::string(e.what()));
  }
}

// ---------------------------------------------------------------------------
// shared option groups
// ---------------------------------------------------------------------------

struct DataOpts {
  std::string data_dir;
  std::string edges, features, labels, train_ids, valid_ids, test_ids;
  std::string structure_cache, distance_cache;
  unsigned threads = 0;

  void from_json(const json& j) {
    set_if(j, "data_dir", data_dir);
    set_if(j, "edges", edges);
    set_if(j, "features", features);
    set_if(j, "labels", labels);
    set_if(j, "train", train_ids);
    set_if(j, "valid", valid_ids);
    set_if(j, "test", test_ids);
    set_if(j, "structure_cache", structure_cache);
    set_if(j, "distance_cache", distance_cache);
    set_if(j, "threads", threads);
  }

  void add_options(CLI::App& cmd) {
    cmd.add_option("--data-dir", data_dir,
                   "Dataset directory with the standard file names");
    cmd.add_option("--edges", edges, "Edge list path (overrides --data-dir)");
    cmd.add_option("--features", features, "Intrinsic feature cache path");
    cmd.add_option("--labels", labels, "Labels path");
    cmd.add_option("--train", train_ids, "Train id list path");
    cmd.add_option("--valid", valid_ids, "Valid id list path");
    cmd.add_option("--test", test_ids, "Test id list path");
    cmd.add_option("--structure-cache", structure_cache,
                   "Structure feature cache (loaded if present, else written)");
    cmd.add_option("--distance-cache", distance_cache,
                   "Distance feature cache (loaded if present, else written)");
    cmd.add_option("--threads", threads, "Extraction threads (0 = all cores)");
  }

  dhse::DatasetPaths paths() const {
    dhse::DatasetPaths p;
    if (!data_dir.empty()) p = dhse::DatasetPaths::in_dir(data_dir);
    if (!edges.empty()) p.edges = edges;
    if (!features.empty()) p.features = features;
    if (!labels.empty()) p.labels = labels;
    if (!train_ids.empty()) p.train = train_ids;
    if (!valid_ids.empty()) p.valid = valid_ids;
    if (!test_ids.empty()) p.test = test_ids;
    if (p.edges.empty()) throw dhse::ValidationError("no dataset given: use --data-dir or --edges");
    return p;
  }
};

std::vector<dhse::FeatureBlock> structure_blocks(int k) {
  std::vector<dhse::FeatureBlock> blocks{{"degree", 0, 2}};
  for (int r = 1; r <= k; ++r) {
    const auto base = static_cast<std::uint64_t>(2 + 6 * (r - 1));
    blocks.push_back({"hop_" + std::to_string(r), base, base + 6});
  }
  return blocks;
}

dhse::Matrix cached_feature_matrix(const std::string& cache, const dhse::Graph& g,
                                   std::size_t expect_cols, const char* what,
                                   const std::function<dhse::Matrix()>& compute,
                                   const std::function<dhse::FeatureMatrix(const dhse::Matrix&)>&
                                       pack) {
  if (!cache.empty() && std::filesystem::exists(cache)) {
    const auto fm = dhse::FeatureMatrix::load(cache);
    if (fm.rows() != g.num_nodes() || fm.cols() != expect_cols) {
      throw dhse::ValidationError(std::string(what) + " cache " + cache +
                                  " does not match this graph/k");
    }
    return fm.to_matrix();
  }
  dhse::Matrix m = compute();
  if (!cache.empty()) pack(m).save(cache);
  return m;
}

dhse::Matrix structure_features_for(const dhse::Graph& g, int k, const DataOpts& data) {
  return cached_feature_matrix(
      data.structure_cache, g, dhse::structure_width(k), "structure",
      [&] { return dhse::structure_matrix(g, k, data.threads); },
      [&](const dhse::Matrix& m) {
        return dhse::FeatureMatrix::from_matrix(m, structure_blocks(k));
      });
}

dhse::Matrix distance_features_for(const dhse::Graph& g, int k, const DataOpts& data) {
  return cached_feature_matrix(
      data.distance_cache, g, dhse::distance_width(), "distance",
      [&] { return dhse::distance_matrix(g, k, data.threads); },
      [&](const dhse::Matrix& m) { return dhse::FeatureMatrix::from_matrix(m, "distance"); });
}

struct ModelOpts {
  std::string kind = "agdn";
  int layers = 2;
  int heads = 3;
  int hidden = 64;
  int diffusion = 3;
  std::string transition = "attention";
  std::string activation = "elu";
  double dropout = 0.0;
  int k = 2;
  bool drop_degree = false, drop_node_level = false, drop_graph_level = false;
  bool drop_distance = false, no_encoding = false;

  void from_json(const json& j) {
    set_if(j, "model", kind);
    set_if(j, "layers", layers);
    set_if(j, "heads", heads);
    set_if(j, "hidden", hidden);
    set_if(j, "diffusion", diffusion);
    set_if(j, "transition", transition);
    set_if(j, "activation", activation);
    set_if(j, "dropout", dropout);
    set_if(j, "k", k);
    set_if(j, "drop_degree", drop_degree);
    set_if(j, "drop_node_level", drop_node_level);
    set_if(j, "drop_graph_level", drop_graph_level);
    set_if(j, "drop_distance", drop_distance);
    set_if(j, "no_encoding", no_encoding);
  }

  void add_options(CLI::App& cmd) {
    cmd.add_option("--model", kind, "Model kind: gat | agdn")->check(CLI::IsMember({"gat", "agdn"}));
    cmd.add_option("--layers", layers, "Graph layers");
    cmd.add_option("--heads", heads, "Attention heads per GAT layer");
    cmd.add_option("--hidden", hidden, "Hidden width");
    cmd.add_option("--diffusion", diffusion, "Diffusion depth K (agdn)");
    cmd.add_option("--transition", transition, "agdn transition: attention | norm_adj")
        ->check(CLI::IsMember({"attention", "norm_adj"}));
    cmd.add_option("--activation", activation, "Nonlinearity: elu | relu")
        ->check(CLI::IsMember({"elu", "relu"}));
    cmd.add_option("--dropout", dropout, "Dropout on the summed embedding");
    cmd.add_option("-k,--k", k, "Hop radius for feature extraction");
    cmd.add_flag("--drop-degree", drop_degree, "Ablation: drop in/out degree");
    cmd.add_flag("--drop-node-level", drop_node_level, "Ablation: drop node-level indicators");
    cmd.add_flag("--drop-graph-level", drop_graph_level, "Ablation: drop graph-level indicators");
    cmd.add_flag("--drop-distance", drop_distance, "Ablation: drop distance statistics");
    cmd.add_flag("--no-encoding", no_encoding, "Ablation: skip encoders, concatenate raw blocks");
  }

  dhse::AblationFlags ablation() const {
    dhse::AblationFlags ab;
    ab.drop_degree = drop_degree;
    ab.drop_node_level = drop_node_level;
    ab.drop_graph_level = drop_graph_level;
    ab.drop_distance = drop_distance;
    ab.no_encoding = no_encoding;
    return ab;
  }

  dhse::ModelConfig model_config(int num_classes) const {
    dhse::ModelConfig cfg;
    cfg.kind = dhse::parse_model_kind(kind);
    cfg.layers = layers;
    cfg.heads = heads;
    cfg.hidden = hidden;
    cfg.diffusion = diffusion;
    cfg.transition = dhse::parse_transition(transition);
    cfg.activation = dhse::parse_activation(activation);
    cfg.dropout = dropout;
    cfg.use_encoder = !no_encoding;
    cfg.num_classes = num_classes;
    return cfg;
  }
};

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthOpts {
  std::string out_dir;
  dhse::SynthConfig cfg;
};

void setup_synth(CLI::App& cmd, SynthOpts& opts, const json& j) {
  set_if(j, "out_dir", opts.out_dir);
  set_if(j, "nodes", opts.cfg.nodes);
  set_if(j, "classes", opts.cfg.classes);
  set_if(j, "p_in", opts.cfg.p_in);
  set_if(j, "p_out", opts.cfg.p_out);
  set_if(j, "feature_dim", opts.cfg.feature_dim);
  set_if(j, "feature_scale", opts.cfg.feature_scale);
  set_if(j, "feature_noise", opts.cfg.feature_noise);
  set_if(j, "train_fraction", opts.cfg.train_fraction);
  set_if(j, "valid_fraction", opts.cfg.valid_fraction);
  set_if(j, "seed", opts.cfg.seed);
  cmd.add_option("--out-dir", opts.out_dir, "Output directory")->required();
  cmd.add_option("--nodes", opts.cfg.nodes, "Node count");
  cmd.add_option("--classes", opts.cfg.classes, "Class count");
  cmd.add_option("--p-in", opts.cfg.p_in, "Intra-class edge probability");
  cmd.add_option("--p-out", opts.cfg.p_out, "Inter-class edge probability");
  cmd.add_option("--feature-dim", opts.cfg.feature_dim, "Intrinsic feature width");
  cmd.add_option("--feature-scale", opts.cfg.feature_scale, "Class mean spread");
  cmd.add_option("--feature-noise", opts.cfg.feature_noise, "Per-node feature noise");
  cmd.add_option("--train-fraction", opts.cfg.train_fraction, "Train fraction per class");
  cmd.add_option("--valid-fraction", opts.cfg.valid_fraction, "Valid fraction per class");
  cmd.add_option("--seed", opts.cfg.seed, "Generator seed");
}

int run_synth(const SynthOpts& opts) {
  const dhse::SynthData data = make_planted_partition(opts.cfg);
  const auto paths = write_dataset(data, opts.out_dir);
  std::cout << "wrote " << data.num_nodes << " nodes, " << data.edges.size() << " edges, "
            << opts.cfg.classes << " classes to " << opts.out_dir << "\n";
  std::cout << "train/valid/test: " << data.split.train.size() << "/" << data.split.valid.size()
            << "/" << data.split.test.size() << "\n";
  (void)paths;
  return 0;
}

// ---------------------------------------------------------------------------
// extract
// ---------------------------------------------------------------------------

struct ExtractOpts {
  std::string edges;
  std::uint64_t num_nodes = 0;  // 0 = infer
  int k = 2;
  std::string out_structure = "structure.dhse";
  std::string out_distance = "distance.dhse";
  unsigned threads = 0;
};

void setup_extract(CLI::App& cmd, ExtractOpts& opts, const json& j) {
  set_if(j, "edges", opts.edges);
  set_if(j, "num_nodes", opts.num_nodes);
  set_if(j, "k", opts.k);
  set_if(j, "out_structure", opts.out_structure);
  set_if(j, "out_distance", opts.out_distance);
  set_if(j, "threads", opts.threads);
  cmd.add_option("--edges", opts.edges, "Edge list path")->required();
  cmd.add_option("--num-nodes", opts.num_nodes, "Node count (0 = max id + 1)");
  cmd.add_option("-k,--k", opts.k, "Hop radius");
  cmd.add_option("--out-structure", opts.out_structure, "Structure cache output");
  cmd.add_option("--out-distance", opts.out_distance, "Distance cache output");
  cmd.add_option("--threads", opts.threads, "Extraction threads (0 = all cores)");
}

int run_extract(const ExtractOpts& opts) {
  const auto declared = opts.num_nodes > 0
                            ? std::optional<std::size_t>(opts.num_nodes)
                            : std::nullopt;
  const dhse::Graph g = dhse::Graph::load_edge_list(opts.edges, declared);
  const dhse::Matrix structure = dhse::structure_matrix(g, opts.k, opts.threads);
  dhse::FeatureMatrix::from_matrix(structure, structure_blocks(opts.k)).save(opts.out_structure);
  const dhse::Matrix distance = dhse::distance_matrix(g, opts.k, opts.threads);
  dhse::FeatureMatrix::from_matrix(distance, "distance").save(opts.out_distance);
  std::cout << "extracted structure (" << structure.rows() << " x " << structure.cols()
            << ") -> " << opts.out_structure << "\n";
  std::cout << "extracted distance  (" << distance.rows() << " x " << distance.cols() << ") -> "
            << opts.out_distance << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainOpts {
  DataOpts data;
  ModelOpts model;
  int epochs = 300;
  double lr = 0.01;
  std::uint64_t seed = 42;
  std::vector<std::uint64_t> seeds;  // overrides --seed when given
  std::string checkpoint = "model.dhsm";
  std::string metrics_csv;
};

void setup_train(CLI::App& cmd, TrainOpts& opts, const json& j) {
  opts.data.from_json(j);
  opts.model.from_json(j);
  set_if(j, "epochs", opts.epochs);
  set_if(j, "lr", opts.lr);
  set_if(j, "seed", opts.seed);
  set_if(j, "seeds", opts.seeds);
  set_if(j, "checkpoint", opts.checkpoint);
  set_if(j, "metrics_csv", opts.metrics_csv);
  opts.data.add_options(cmd);
  opts.model.add_options(cmd);
  cmd.add_option("--epochs", opts.epochs, "Training epochs");
  cmd.add_option("--lr", opts.lr, "Adam learning rate");
  cmd.add_option("--seed", opts.seed, "Init/train seed");
  cmd.add_option("--seeds", opts.seeds, "Run several seeds and report mean ± std")
      ->delimiter(',');
  cmd.add_option("--checkpoint", opts.checkpoint, "Checkpoint output path");
  cmd.add_option("--metrics-csv", opts.metrics_csv, "Metrics CSV output path");
}

std::string seed_checkpoint_path(const std::string& base, std::uint64_t seed, bool multi) {
  if (!multi) return base;
  const std::filesystem::path p(base);
  std::filesystem::path out = p.parent_path() / p.stem();
  return out.string() + ".seed" + std::to_string(seed) + p.extension().string();
}

int run_train(const TrainOpts& opts) {
  const dhse::Dataset ds = load_dataset(opts.data.paths());
  const dhse::Matrix structure = structure_features_for(ds.graph, opts.model.k, opts.data);
  const dhse::Matrix distance = distance_features_for(ds.graph, opts.model.k, opts.data);
  const dhse::AblationFlags ablation = opts.model.ablation();
  const dhse::FeatureInputs inputs =
      assemble_inputs(ds.intrinsic, structure, distance, opts.model.k, ablation);
  const dhse::GraphContext ctx = dhse::GraphContext::build(ds.graph);

  const std::vector<std::uint64_t> seeds =
      opts.seeds.empty() ? std::vector<std::uint64_t>{opts.seed} : opts.seeds;
  const bool multi = seeds.size() > 1;

  dhse::Table summary;
  summary.columns = {"seed", "final_loss", "train_acc", "valid_acc", "test_acc"};
  std::vector<double> valid_accs, test_accs;
  dhse::Table epochs_table;
  epochs_table.columns = {"epoch", "loss", "train_acc", "valid_acc"};

  for (const std::uint64_t seed : seeds) {
    const dhse::ModelSpec spec =
        make_model_spec(opts.model.model_config(ds.num_classes), opts.model.k, ablation, inputs,
                        seed);
    dhse::DhseModel model = build_model(spec);
    dhse::TrainConfig tc;
    tc.epochs = opts.epochs;
    tc.lr = opts.lr;
    tc.seed = seed;
    const dhse::TrainResult result =
        train_model(model, inputs, ctx, ds.labels, ds.split, tc);

    const auto& last = result.final_epoch();
    const double test_acc = accuracy(result.final_output.probs, ds.labels, ds.split.test);
    valid_accs.push_back(last.valid_accuracy);
    test_accs.push_back(test_acc);
    summary.add_row({std::to_string(seed), dhse::format_double(last.loss),
                     dhse::format_double(last.train_accuracy),
                     dhse::format_double(last.valid_accuracy), dhse::format_double(test_acc)});

    if (!multi) {
      for (const auto& m : result.history) {
        epochs_table.add_row({std::to_string(m.epoch), dhse::format_double(m.loss, 6),
                              dhse::format_double(m.train_accuracy),
                              dhse::format_double(m.valid_accuracy)});
      }
    }

    const std::string path = seed_checkpoint_path(opts.checkpoint, seed, multi);
    save_checkpoint(path, dhse::to_json(spec).dump(2), model.params());
    std::cout << "seed " << seed << ": train " << dhse::format_double(last.train_accuracy)
              << ", valid " << dhse::format_double(last.valid_accuracy) << ", test "
              << dhse::format_double(test_acc) << " -> " << path << "\n";
  }

  if (multi) {
    const auto vm = dhse::mean_std(valid_accs);
    const auto tm = dhse::mean_std(test_accs);
    summary.add_row({"mean±std", "", "", dhse::format_mean_std(vm), dhse::format_mean_std(tm)});
    std::cout << "\n" << render_table(summary);
    std::cout << "valid accuracy " << dhse::format_mean_std(vm) << ", test accuracy "
              << dhse::format_mean_std(tm) << " over " << seeds.size() << " seeds\n";
  }
  if (!opts.metrics_csv.empty()) {
    write_csv(opts.metrics_csv, multi ? summary : epochs_table);
    std::cout << "metrics -> " << opts.metrics_csv << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// cs / eval shared: rebuild a checkpointed model over a dataset
// ---------------------------------------------------------------------------

struct RestoredModel {
  dhse::ModelSpec spec;
  dhse::DhseModel model;
  dhse::FeatureInputs inputs;
  dhse::GraphContext ctx;
  dhse::ModelOutput output;
};

RestoredModel restore_and_run(const std::string& checkpoint_path, const DataOpts& data,
                              const dhse::Dataset& ds) {
  const dhse::Checkpoint ckpt = dhse::load_checkpoint(checkpoint_path);
  dhse::ModelSpec spec;
  try {
    spec = dhse::model_spec_from_json(json::parse(ckpt.config_json));
  } catch (const json::exception& e) {
    throw dhse::ValidationError("bad checkpoint config: " + std::string(e.what()));
  }
  RestoredModel rm{spec, build_model(spec), {}, {}, {}};
  auto params = rm.model.params();
  apply_checkpoint(ckpt, params);

  const dhse::Matrix structure = structure_features_for(ds.graph, spec.k, data);
  const dhse::Matrix distance = distance_features_for(ds.graph, spec.k, data);
  rm.inputs = assemble_inputs(ds.intrinsic, structure, distance, spec.k, spec.ablation);
  if (rm.inputs.intrinsic.cols() != spec.intrinsic_width ||
      rm.inputs.distance.cols() != spec.distance_width ||
      rm.inputs.structure.cols() != spec.structure_width) {
    throw dhse::ValidationError("dataset feature widths do not match the checkpoint");
  }
  rm.ctx = dhse::GraphContext::build(ds.graph);
  dhse::ModelTape tape;
  rm.output = rm.model.forward(rm.inputs, rm.ctx, tape);
  return rm;
}

struct CsOpts {
  DataOpts data;
  std::string checkpoint;
  dhse::CsConfig cs;
  std::string report_csv;
  std::string predictions;
};

void setup_cs(CLI::App& cmd, CsOpts& opts, const json& j) {
  opts.data.from_json(j);
  set_if(j, "checkpoint", opts.checkpoint);
  set_if(j, "alpha_correct", opts.cs.alpha_correct);
  set_if(j, "alpha_smooth", opts.cs.alpha_smooth);
  set_if(j, "scale", opts.cs.scale);
  set_if(j, "max_iters", opts.cs.max_iters);
  set_if(j, "tol", opts.cs.tol);
  set_if(j, "report_csv", opts.report_csv);
  set_if(j, "predictions", opts.predictions);
  opts.data.add_options(cmd);
  cmd.add_option("--checkpoint", opts.checkpoint, "Trained model checkpoint")->required();
  cmd.add_option("--alpha-correct", opts.cs.alpha_correct, "Error-spreading alpha");
  cmd.add_option("--alpha-smooth", opts.cs.alpha_smooth, "Label-smoothing alpha");
  cmd.add_option("--scale", opts.cs.scale, "FDiff scale s on the spread error");
  cmd.add_option("--max-iters", opts.cs.max_iters, "Fixed-point iteration cap");
  cmd.add_option("--tol", opts.cs.tol, "Fixed-point stopping tolerance");
  cmd.add_option("--report-csv", opts.report_csv, "Report CSV output path");
  cmd.add_option("--predictions", opts.predictions, "Final per-node labels output path");
}

int run_cs(const CsOpts& opts) {
  const dhse::Dataset ds = load_dataset(opts.data.paths());
  const RestoredModel rm = restore_and_run(opts.checkpoint, opts.data, ds);

  dhse::LabelState state = label_state_from(rm.output.probs, ds);
  const dhse::NormalizedAdjacency s = dhse::NormalizedAdjacency::build(ds.graph);
  const dhse::Matrix final_scores = correct_and_smooth(state, s, opts.cs);

  const double base_valid = accuracy(rm.output.probs, ds.labels, ds.split.valid);
  const double base_test = accuracy(rm.output.probs, ds.labels, ds.split.test);
  const auto final_pred = predict(final_scores);
  const auto acc_on = [&](const std::vector<dhse::NodeId>& rows) {
    if (rows.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto i : rows) hits += final_pred[i] == ds.labels[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(rows.size());
  };

  dhse::Table report;
  report.columns = {"model", "valid_acc", "test_acc"};
  report.add_row({"base", dhse::format_double(base_valid), dhse::format_double(base_test)});
  report.add_row({"base+C&S", dhse::format_double(acc_on(ds.split.valid)),
                  dhse::format_double(acc_on(ds.split.test))});
  std::cout << render_table(report);
  if (!opts.report_csv.empty()) {
    write_csv(opts.report_csv, report);
    std::cout << "report -> " << opts.report_csv << "\n";
  }
  if (!opts.predictions.empty()) {
    dhse::save_labels(opts.predictions, final_pred);
    std::cout << "predictions -> " << opts.predictions << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalOpts {
  DataOpts data;
  std::string checkpoint;
  std::string report_csv;
};

void setup_eval(CLI::App& cmd, EvalOpts& opts, const json& j) {
  opts.data.from_json(j);
  set_if(j, "checkpoint", opts.checkpoint);
  set_if(j, "report_csv", opts.report_csv);
  opts.data.add_options(cmd);
  cmd.add_option("--checkpoint", opts.checkpoint, "Trained model checkpoint")->required();
  cmd.add_option("--report-csv", opts.report_csv, "Report CSV output path");
}

int run_eval(const EvalOpts& opts) {
  const dhse::Dataset ds = load_dataset(opts.data.paths());
  const RestoredModel rm = restore_and_run(opts.checkpoint, opts.data, ds);
  dhse::Table report;
  report.columns = {"split", "accuracy", "nodes"};
  const auto row = [&](const char* name, const std::vector<dhse::NodeId>& rows) {
    report.add_row({name,
                    rows.empty() ? "n/a" : dhse::format_double(accuracy(rm.output.probs,
                                                                        ds.labels, rows)),
                    std::to_string(rows.size())});
  };
  row("train", ds.split.train);
  row("valid", ds.split.valid);
  row("test", ds.split.test);
  std::cout << render_table(report);
  if (!opts.report_csv.empty()) {
    write_csv(opts.report_csv, report);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// ingest-arxiv
// ---------------------------------------------------------------------------

struct IngestOpts {
  std::string raw_dir;
  std::string out_dir;
};

void setup_ingest(CLI::App& cmd, IngestOpts& opts, const json& j) {
  set_if(j, "raw_dir", opts.raw_dir);
  set_if(j, "out_dir", opts.out_dir);
  cmd.add_option("--raw-dir", opts.raw_dir, "Directory with edge.csv, node-feat.csv, ...")
      ->required();
  cmd.add_option("--out-dir", opts.out_dir, "Output dataset directory")->required();
}

int run_ingest(const IngestOpts& opts) {
  dhse::ingest_arxiv(opts.raw_dir, opts.out_dir);
  std::cout << "ingested " << opts.raw_dir << " -> " << opts.out_dir << "\n";
  return 0;
}

int run(int argc, char** argv) {
  const json cfg = load_config_json(argc, argv);

  CLI::App app{"distance and hop-wise structure encoding toolkit"};
  app.require_subcommand(1);

  std::string config_path_sink;

  SynthOpts synth_opts;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a planted-partition dataset");
  synth_cmd->add_option("--config", config_path_sink, "JSON config (flags override)");
  setup_synth(*synth_cmd, synth_opts, cfg);

  ExtractOpts extract_opts;
  auto* extract_cmd = app.add_subcommand("extract", "Extract structure/distance feature caches");
  extract_cmd->add_option("--config", config_path_sink, "JSON config (flags override)");
  setup_extract(*extract_cmd, extract_opts, cfg);

  TrainOpts train_opts;
  auto* train_cmd = app.add_subcommand("train", "Train a GAT/AGDN over encoded features");
  train_cmd->add_option("--config", config_path_sink, "JSON config (flags override)");
  setup_train(*train_cmd, train_opts, cfg);

  CsOpts cs_opts;
  auto* cs_cmd = app.add_subcommand("cs", "Correct-and-smooth a checkpoint's predictions");
  cs_cmd->add_option("--config", config_path_sink, "JSON config (flags override)");
  setup_cs(*cs_cmd, cs_opts, cfg);

  EvalOpts eval_opts;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  eval_cmd->add_option("--config", config_path_sink, "JSON config (flags override)");
  setup_eval(*eval_cmd, eval_opts, cfg);

  IngestOpts ingest_opts;
  auto* ingest_cmd =
      app.add_subcommand("ingest-arxiv", "Convert ogbn-arxiv style raw CSVs to dataset files");
  ingest_cmd->add_option("--config", config_path_sink, "JSON config (flags override)");
  setup_ingest(*ingest_cmd, ingest_opts, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (synth_cmd->parsed()) return run_synth(synth_opts);
  if (extract_cmd->parsed()) return run_extract(extract_opts);
  if (train_cmd->parsed()) return run_train(train_opts);
  if (cs_cmd->parsed()) return run_cs(cs_opts);
  if (eval_cmd->parsed()) return run_eval(eval_opts);
  if (ingest_cmd->parsed()) return run_ingest(ingest_opts);
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dhse::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const dhse::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dhse::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
