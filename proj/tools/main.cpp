// Command-line pipeline: synthesize plans, build room graphs, train and
// evaluate the model zoo, export untrained embeddings, run exact t-SNE.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "floorgnn/analysis.hpp"
#include "floorgnn/error.hpp"
#include "floorgnn/floorplan.hpp"
#include "floorgnn/graph.hpp"
#include "floorgnn/model.hpp"
#include "floorgnn/rng.hpp"
#include "floorgnn/train.hpp"
#include "floorgnn/tsne.hpp"

namespace {

using namespace floorgnn;

ModelKind parse_kind_or_fail(const std::string& name) {
  std::optional<ModelKind> kind = parse_kind(name);
  if (!kind) fail(ErrorCode::bad_config, "unknown model kind: " + name);
  return *kind;
}

std::vector<ModelKind> parse_kind_list(const std::string& list) {
  if (list == "all")
    return {ModelKind::mlp, ModelKind::gcn, ModelKind::gat, ModelKind::sage,
            ModelKind::tagcn};
  std::vector<ModelKind> kinds;
  size_t pos = 0;
  while (pos <= list.size()) {
    size_t comma = list.find(',', pos);
    if (comma == std::string::npos) comma = list.size();
    kinds.push_back(parse_kind_or_fail(list.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return kinds;
}

// "2..12", "3", or "2,4,8"
std::vector<int> parse_depth_list(const std::string& list) {
  std::vector<int> depths;
  size_t range = list.find("..");
  try {
    if (range != std::string::npos) {
      int lo = std::stoi(list.substr(0, range));
      int hi = std::stoi(list.substr(range + 2));
      if (lo > hi) fail(ErrorCode::bad_config, "empty depth range: " + list);
      for (int d = lo; d <= hi; ++d) depths.push_back(d);
      return depths;
    }
    size_t pos = 0;
    while (pos <= list.size()) {
      size_t comma = list.find(',', pos);
      if (comma == std::string::npos) comma = list.size();
      depths.push_back(std::stoi(list.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  } catch (const std::logic_error&) {
    fail(ErrorCode::bad_config, "cannot parse depth list: " + list);
  }
  return depths;
}

CategoryVocab load_vocab_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) labels.push_back(line);
  return CategoryVocab(labels);
}

// Graphs for every plan; plans with no adjacent room pair are dropped when
// skip_empty is set (otherwise the first one aborts the build).
std::vector<RoomGraph> build_all(const Dataset& d, const GraphBuildConfig& cfg,
                                 bool skip_empty, int* skipped) {
  std::vector<RoomGraph> graphs;
  graphs.reserve(d.plans.size());
  for (const FloorPlanRecord& p : d.plans) {
    try {
      graphs.push_back(build_graph(p, d.vocab, cfg));
    } catch (const Error& e) {
      if (skip_empty && e.code() == ErrorCode::empty_edges) {
        if (skipped) ++*skipped;
        continue;
      }
      throw;
    }
  }
  return graphs;
}

int run(int argc, char** argv) {
  CLI::App app{"floor-plan room graphs, GNN model zoo, and analysis pipeline"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic plan dataset");
  std::string synth_out;
  SynthConfig synth_cfg;
  synth->add_option("--out", synth_out, "output dataset JSONL")->required();
  synth->add_option("--n-plans", synth_cfg.n_plans, "number of plans")->required();
  synth->add_option("--seed", synth_cfg.seed, "generator seed")->required();
  synth->add_option("--rooms-min", synth_cfg.rooms_min, "minimum rooms per plan");
  synth->add_option("--rooms-max", synth_cfg.rooms_max, "maximum rooms per plan");
  synth->add_option("--n-categories", synth_cfg.n_categories,
                    "category count for the degree rule");

  // build
  auto* build = app.add_subcommand("build", "build room graphs from a dataset");
  std::string build_in, build_out, build_vocab;
  GraphBuildConfig build_cfg;
  bool build_skip_empty = false;
  build->add_option("--in", build_in, "input dataset JSONL")->required();
  build->add_option("--out", build_out, "output graph JSONL")->required();
  build->add_option("--threshold", build_cfg.adjacency_threshold,
                    "adjacency gap threshold");
  build->add_option("--nesting-ratio", build_cfg.nesting_ratio,
                    "parent/child overlap ratio");
  build->add_option("--vocab", build_vocab, "category list, one label per line");
  build->add_flag("--skip-empty-edges", build_skip_empty,
                  "drop plans with no adjacent room pair instead of failing");

  // train
  auto* train_cmd = app.add_subcommand("train", "train one model on a graph file");
  std::string train_graphs, train_test_graphs, train_model = "mlp";
  std::string train_ckpt, train_metrics;
  int train_depth = 3;
  TrainConfig train_cfg;
  uint64_t train_seed = 0;
  train_cmd->add_option("--graphs", train_graphs, "training graph JSONL")->required();
  train_cmd->add_option("--model", train_model, "mlp|gcn|gat|sage|tagcn")->required();
  train_cmd->add_option("--depth", train_depth, "hidden-layer count")->required();
  train_cmd->add_option("--epochs", train_cfg.epochs, "training epochs");
  train_cmd->add_option("--batch-size", train_cfg.batch_size, "graphs per batch");
  train_cmd->add_option("--lr", train_cfg.schedule.base_lr, "base learning rate");
  train_cmd->add_option("--lr-step", train_cfg.schedule.step_size,
                        "epochs per learning-rate step");
  train_cmd->add_option("--lr-gamma", train_cfg.schedule.gamma,
                        "learning-rate decay factor");
  train_cmd->add_option("--seed", train_seed, "init and shuffle seed");
  train_cmd->add_option("--graphs-test", train_test_graphs,
                        "optional test graph JSONL for test metrics");
  train_cmd->add_option("--eval-every", train_cfg.eval_every,
                        "test-metric cadence in epochs (0 = final only)");
  train_cmd->add_option("--out-checkpoint", train_ckpt, "checkpoint path")->required();
  train_cmd->add_option("--out-metrics", train_metrics, "metrics CSV path")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a graph file");
  std::string eval_graphs, eval_ckpt, eval_metrics;
  eval_cmd->add_option("--graphs", eval_graphs, "graph JSONL")->required();
  eval_cmd->add_option("--checkpoint", eval_ckpt, "checkpoint path")->required();
  eval_cmd->add_option("--out-metrics", eval_metrics, "metrics CSV path")->required();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "depth sweep over model kinds");
  std::string sweep_train, sweep_test, sweep_models = "all", sweep_depths = "2..12";
  std::string sweep_metrics;
  TrainConfig sweep_cfg;
  uint64_t sweep_seed = 0;
  sweep_cmd->add_option("--graphs-train", sweep_train, "training graph JSONL")->required();
  sweep_cmd->add_option("--graphs-test", sweep_test, "test graph JSONL")->required();
  sweep_cmd->add_option("--models", sweep_models, "comma list or 'all'")->required();
  sweep_cmd->add_option("--depths", sweep_depths, "range 'A..B' or comma list")->required();
  sweep_cmd->add_option("--epochs", sweep_cfg.epochs, "training epochs");
  sweep_cmd->add_option("--batch-size", sweep_cfg.batch_size, "graphs per batch");
  sweep_cmd->add_option("--lr", sweep_cfg.schedule.base_lr, "base learning rate");
  sweep_cmd->add_option("--lr-step", sweep_cfg.schedule.step_size,
                        "epochs per learning-rate step");
  sweep_cmd->add_option("--lr-gamma", sweep_cfg.schedule.gamma,
                        "learning-rate decay factor");
  sweep_cmd->add_option("--seed", sweep_seed, "sweep seed (cells derive their own)");
  sweep_cmd->add_option("--out-metrics", sweep_metrics, "metrics CSV path")->required();

  // embed
  auto* embed_cmd = app.add_subcommand("embed", "export untrained node embeddings");
  std::string embed_graphs, embed_model, embed_out;
  int embed_cap = 10000, embed_depth = 3;
  uint64_t embed_seed = 0;
  std::optional<uint64_t> embed_sample_seed;
  uint64_t embed_sample_seed_raw = 0;
  embed_cmd->add_option("--graphs", embed_graphs, "graph JSONL")->required();
  embed_cmd->add_option("--model", embed_model, "mlp|gcn|gat|sage|tagcn")->required();
  embed_cmd->add_option("--cap", embed_cap, "maximum node rows");
  embed_cmd->add_option("--seed", embed_seed, "untrained-weight seed")->required();
  embed_cmd->add_option("--depth", embed_depth, "hidden-layer count");
  auto* sample_opt = embed_cmd->add_option(
      "--sample-seed", embed_sample_seed_raw,
      "sample nodes uniformly instead of taking the prefix");
  embed_cmd->add_option("--out", embed_out, "embedding CSV path")->required();

  // tsne
  auto* tsne_cmd = app.add_subcommand("tsne", "2-D t-SNE of an embedding CSV");
  std::string tsne_in, tsne_out;
  TsneConfig tsne_cfg;
  tsne_cmd->add_option("--in", tsne_in, "embedding CSV")->required();
  tsne_cmd->add_option("--out", tsne_out, "coordinate CSV path")->required();
  tsne_cmd->add_option("--perplexity", tsne_cfg.perplexity, "target perplexity");
  tsne_cmd->add_option("--iterations", tsne_cfg.iterations, "gradient iterations");
  tsne_cmd->add_option("--learning-rate", tsne_cfg.learning_rate, "step size");
  tsne_cmd->add_option("--early-exaggeration", tsne_cfg.early_exaggeration,
                       "P multiplier for the first iterations");
  tsne_cmd->add_option("--exaggeration-iters", tsne_cfg.exaggeration_iters,
                       "iterations under early exaggeration");
  tsne_cmd->add_option("--seed", tsne_cfg.seed, "init seed");

  // fullrun: non-gating harness reproducing the full pipeline on a real dataset
  auto* full_cmd = app.add_subcommand(
      "fullrun", "clean, split, build, and train every model kind on a dataset");
  std::string full_data, full_dir;
  int full_n_train = 120000, full_depth = 3;
  TrainConfig full_cfg;
  uint64_t full_seed = 0;
  full_cmd->add_option("--data", full_data, "plan dataset JSONL")->required();
  full_cmd->add_option("--out-dir", full_dir, "output directory")->required();
  full_cmd->add_option("--n-train", full_n_train, "training-plan count");
  full_cmd->add_option("--depth", full_depth, "hidden-layer count");
  full_cmd->add_option("--epochs", full_cfg.epochs, "training epochs");
  full_cmd->add_option("--batch-size", full_cfg.batch_size, "graphs per batch");
  full_cmd->add_option("--seed", full_seed, "run seed");

  CLI11_PARSE(app, argc, argv);

  if (*synth) {
    Dataset d = generate_synthetic(synth_cfg);
    save_dataset(d, synth_out);
    std::cout << "wrote " << d.plans.size() << " plans to " << synth_out << "\n";
  } else if (*build) {
    std::optional<CategoryVocab> vocab;
    if (!build_vocab.empty()) vocab = load_vocab_file(build_vocab);
    Dataset d = load_dataset(build_in, DataFormat::jsonl, vocab);
    CleanResult cleaned = clean_dataset(d);
    int skipped = 0;
    std::vector<RoomGraph> graphs =
        build_all(cleaned.dataset, build_cfg, build_skip_empty, &skipped);
    write_graphs(graphs, build_out);
    std::cout << "wrote " << graphs.size() << " graphs to " << build_out << " ("
              << cleaned.removed << " plans dropped by cleaning, " << skipped
              << " with empty edges)\n";
  } else if (*train_cmd) {
    std::vector<RoomGraph> graphs = read_graphs(train_graphs);
    ModelConfig mc;
    mc.kind = parse_kind_or_fail(train_model);
    mc.depth = train_depth;
    mc.seed = train_seed;
    train_cfg.seed = train_seed;
    Model m = init_model(mc);
    std::vector<RoomGraph> test_graphs;
    const std::vector<RoomGraph>* test_ptr = nullptr;
    if (!train_test_graphs.empty()) {
      test_graphs = read_graphs(train_test_graphs);
      test_ptr = &test_graphs;
    }
    std::vector<MetricsRow> history = train(m, graphs, train_cfg, test_ptr);
    save_checkpoint(m, train_ckpt);
    write_metrics_csv(history, train_metrics);
    std::cout << "final train accuracy " << history.back().accuracy << " ("
              << history.back().split << " row)\n";
  } else if (*eval_cmd) {
    Model m = load_checkpoint(eval_ckpt);
    std::vector<RoomGraph> graphs = read_graphs(eval_graphs);
    auto [loss, acc] = evaluate_accuracy(m, graphs);
    MetricsRow row{kind_name(m.config.kind), m.config.depth, 0, "test", loss, acc};
    write_metrics_csv({row}, eval_metrics);
    std::cout << "loss " << loss << " accuracy " << acc << "\n";
  } else if (*sweep_cmd) {
    std::vector<RoomGraph> tr = read_graphs(sweep_train);
    std::vector<RoomGraph> te = read_graphs(sweep_test);
    sweep_cfg.seed = sweep_seed;
    ModelConfig proto;
    std::vector<MetricsRow> rows = depth_sweep(parse_kind_list(sweep_models),
                                               parse_depth_list(sweep_depths), tr, te,
                                               sweep_cfg, proto);
    write_metrics_csv(rows, sweep_metrics);
    std::cout << "wrote " << rows.size() << " rows to " << sweep_metrics << "\n";
  } else if (*embed_cmd) {
    std::vector<RoomGraph> graphs = read_graphs(embed_graphs);
    if (sample_opt->count() > 0) embed_sample_seed = embed_sample_seed_raw;
    EmbeddingDump dump =
        export_embeddings(parse_kind_or_fail(embed_model), graphs, embed_cap,
                          embed_seed, embed_depth, embed_sample_seed);
    write_embeddings_csv(dump, embed_out);
    std::cout << "wrote " << dump.rows.size() << " embedding rows to " << embed_out
              << "\n";
  } else if (*tsne_cmd) {
    EmbeddingDump dump = read_embeddings_csv(tsne_in);
    int n = static_cast<int>(dump.rows.size());
    std::vector<double> x;
    x.reserve(static_cast<size_t>(n) * dump.dim);
    for (const EmbeddingRow& r : dump.rows)
      x.insert(x.end(), r.e.begin(), r.e.end());
    std::vector<double> coords = tsne_embed(x, n, dump.dim, tsne_cfg);
    write_tsne_csv(dump, coords, tsne_out);
    std::cout << "wrote " << n << " coordinates to " << tsne_out << "\n";
  } else if (*full_cmd) {
    std::filesystem::create_directories(full_dir);
    Dataset d = load_dataset(full_data);
    CleanResult cleaned = clean_dataset(d);
    auto [train_d, test_d] = split_dataset(cleaned.dataset, full_n_train);
    GraphBuildConfig gb;
    int skipped = 0;
    std::vector<RoomGraph> tr = build_all(train_d, gb, true, &skipped);
    std::vector<RoomGraph> te = build_all(test_d, gb, true, &skipped);
    std::cout << "cleaned " << cleaned.removed << ", skipped " << skipped
              << " empty-edge plans; " << tr.size() << " train / " << te.size()
              << " test graphs\n";
    std::vector<MetricsRow> rows;
    for (ModelKind kind : {ModelKind::mlp, ModelKind::gcn, ModelKind::gat,
                           ModelKind::sage, ModelKind::tagcn}) {
      ModelConfig mc;
      mc.kind = kind;
      mc.depth = full_depth;
      mc.seed = mix_seed(full_seed, static_cast<uint64_t>(kind));
      full_cfg.seed = mc.seed;
      Model m = init_model(mc);
      std::vector<MetricsRow> history = train(m, tr, full_cfg, &te);
      rows.push_back(history[history.size() - 2]);
      rows.push_back(history.back());
      save_checkpoint(m, full_dir + "/" + kind_name(kind) + ".ckpt.json");
      std::cout << kind_name(kind) << ": test accuracy " << rows.back().accuracy
                << "\n";
    }
    write_metrics_csv(rows, full_dir + "/metrics.csv");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
