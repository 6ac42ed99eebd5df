#include "floorgnn/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>

#include "floorgnn/error.hpp"
#include "floorgnn/rng.hpp"
#include "json.hpp"

namespace floorgnn {

namespace {

constexpr int kEvalChunkGraphs = 512;
constexpr int kCheckpointVersion = 1;

std::pair<double, double> eval_batch(const Model& m, const BatchedGraph& b,
                                     long& correct, long& total) {
  Tensor logits = model_forward(m, b);
  Tape scratch;
  double loss = scratch.softmax_cross_entropy(logits, b.labels).value();
  for (int i = 0; i < b.n; ++i) {
    int pred = argmax_row(logits.data.data() + static_cast<size_t>(i) * logits.cols,
                          logits.cols);
    if (pred == b.labels[i]) ++correct;
  }
  total += b.n;
  return {loss, static_cast<double>(b.n)};
}

}  // namespace

std::pair<double, double> evaluate_accuracy(const Model& m,
                                            const std::vector<RoomGraph>& graphs) {
  if (graphs.empty()) fail(ErrorCode::empty_data, "evaluate_accuracy on empty graph list");
  long correct = 0;
  long total = 0;
  double loss_sum = 0.0;
  for (size_t start = 0; start < graphs.size(); start += kEvalChunkGraphs) {
    size_t stop = std::min(graphs.size(), start + kEvalChunkGraphs);
    std::vector<const RoomGraph*> chunk;
    chunk.reserve(stop - start);
    for (size_t i = start; i < stop; ++i) chunk.push_back(&graphs[i]);
    BatchedGraph b = batch_graphs(chunk);
    auto [loss, nodes] = eval_batch(m, b, correct, total);
    loss_sum += loss * nodes;
  }
  return {loss_sum / total, static_cast<double>(correct) / total};
}

std::vector<MetricsRow> train(Model& m, const std::vector<RoomGraph>& graphs,
                              const TrainConfig& cfg,
                              const std::vector<RoomGraph>* test_graphs) {
  if (graphs.empty()) fail(ErrorCode::empty_data, "train on empty graph list");
  if (cfg.epochs < 1 || cfg.batch_size < 1)
    fail(ErrorCode::bad_config, "epochs and batch_size must be >= 1");

  std::vector<Param*> params = trainable_params(m);
  AdamState adam = AdamState::for_params(params);
  Rng rng(mix_seed(cfg.seed, 1));

  std::vector<int> order(graphs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  std::vector<MetricsRow> history;
  const char* name = kind_name(m.config.kind);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle_each_epoch) rng.shuffle(order);
    double lr = lr_at_epoch(cfg.schedule, epoch);

    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(cfg.batch_size)) {
      size_t stop = std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
      std::vector<const RoomGraph*> chunk;
      chunk.reserve(stop - start);
      for (size_t i = start; i < stop; ++i) chunk.push_back(&graphs[order[i]]);
      BatchedGraph batch = batch_graphs(chunk);
      GraphStructure gs = make_structure(batch);

      Tape tape;
      BoundModel bm = bind_model(tape, m, true);
      Tensor logits = bound_forward(tape, bm, gs, features_tensor(batch));
      Tensor loss = tape.softmax_cross_entropy(logits, batch.labels);
      tape.backward(loss);

      std::vector<std::vector<double>> grads;
      grads.reserve(params.size());
      for (const std::vector<Tensor>& layer : bm.layers)
        for (const Tensor& p : layer) grads.push_back(tape.grad(p));
      adam_step(params, grads, adam, lr);
    }

    auto [train_loss, train_acc] = evaluate_accuracy(m, graphs);
    history.push_back(MetricsRow{name, m.config.depth, epoch, "train", train_loss, train_acc});

    bool last = epoch == cfg.epochs - 1;
    bool periodic = cfg.eval_every > 0 && (epoch + 1) % cfg.eval_every == 0;
    if (test_graphs && !test_graphs->empty() && (last || periodic)) {
      auto [test_loss, test_acc] = evaluate_accuracy(m, *test_graphs);
      history.push_back(MetricsRow{name, m.config.depth, epoch, "test", test_loss, test_acc});
    }
  }
  return history;
}

std::vector<MetricsRow> depth_sweep(const std::vector<ModelKind>& kinds,
                                    const std::vector<int>& depths,
                                    const std::vector<RoomGraph>& train_graphs,
                                    const std::vector<RoomGraph>& test_graphs,
                                    const TrainConfig& cfg, const ModelConfig& proto) {
  if (kinds.empty() || depths.empty())
    fail(ErrorCode::bad_config, "depth_sweep needs at least one kind and one depth");

  std::vector<MetricsRow> rows;
  for (ModelKind kind : kinds) {
    for (int depth : depths) {
      uint64_t cell_seed =
          mix_seed(mix_seed(cfg.seed, static_cast<uint64_t>(kind)), static_cast<uint64_t>(depth));
      ModelConfig mc = proto;
      mc.kind = kind;
      mc.depth = depth;
      mc.seed = cell_seed;
      TrainConfig tc = cfg;
      tc.seed = mix_seed(cell_seed, 1);
      try {
        Model m = init_model(mc);
        std::vector<MetricsRow> history = train(m, train_graphs, tc);
        rows.push_back(history.back());  // final-epoch train row
        auto [test_loss, test_acc] = evaluate_accuracy(m, test_graphs);
        rows.push_back(MetricsRow{kind_name(kind), depth, tc.epochs - 1, "test",
                                  test_loss, test_acc});
      } catch (const Error& e) {
        fail(e.code(), std::string("sweep cell (") + kind_name(kind) + ", depth " +
                           std::to_string(depth) + "): " + e.message());
      }
    }
  }
  return rows;
}

void save_checkpoint(const Model& m, const std::string& path) {
  nlohmann::json params = nlohmann::json::array();
  for (const Layer& l : m.layers)
    for (const Param& p : l.params)
      params.push_back({{"name", p.name}, {"rows", p.rows}, {"cols", p.cols},
                        {"data", p.value}});
  nlohmann::json j = {
      {"format_version", kCheckpointVersion},
      {"config",
       {{"kind", kind_name(m.config.kind)},
        {"depth", m.config.depth},
        {"hidden_dim", m.config.hidden_dim},
        {"in_dim", m.config.in_dim},
        {"out_dim", m.config.out_dim},
        {"tagcn_k", m.config.tagcn_k},
        {"gat_heads", m.config.gat_heads},
        {"gat_slope", m.config.gat_slope},
        {"seed", m.config.seed}}},
      {"params", params}};
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path);
  out << j.dump(2) << '\n';
  out.flush();
  if (!out) fail(ErrorCode::io, "write error on " + path);
}

Model load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::schema, std::string("checkpoint parse: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format_version") ||
      !j["format_version"].is_number_integer())
    fail(ErrorCode::schema, "checkpoint lacks format_version");
  if (j["format_version"].get<int>() != kCheckpointVersion)
    fail(ErrorCode::version, "unsupported checkpoint format_version " +
                                 j["format_version"].dump());
  if (!j.contains("config") || !j.contains("params"))
    fail(ErrorCode::schema, "checkpoint lacks config or params");

  const nlohmann::json& jc = j["config"];
  ModelConfig cfg;
  try {
    std::optional<ModelKind> kind = parse_kind(jc.at("kind").get<std::string>());
    if (!kind) fail(ErrorCode::schema, "unknown model kind in checkpoint");
    cfg.kind = *kind;
    cfg.depth = jc.at("depth").get<int>();
    cfg.hidden_dim = jc.at("hidden_dim").get<int>();
    cfg.in_dim = jc.at("in_dim").get<int>();
    cfg.out_dim = jc.at("out_dim").get<int>();
    cfg.tagcn_k = jc.at("tagcn_k").get<int>();
    cfg.gat_heads = jc.at("gat_heads").get<int>();
    cfg.gat_slope = jc.at("gat_slope").get<double>();
    cfg.seed = jc.at("seed").get<uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::schema, std::string("checkpoint config: ") + e.what());
  }

  Model m = init_model(cfg);  // establishes the expected parameter layout
  std::vector<Param*> params = trainable_params(m);
  if (j["params"].size() != params.size())
    fail(ErrorCode::config_mismatch,
         "checkpoint holds " + std::to_string(j["params"].size()) +
             " parameters, config expects " + std::to_string(params.size()));
  for (size_t i = 0; i < params.size(); ++i) {
    const nlohmann::json& jp = j["params"][i];
    try {
      if (jp.at("name").get<std::string>() != params[i]->name ||
          jp.at("rows").get<int>() != params[i]->rows ||
          jp.at("cols").get<int>() != params[i]->cols)
        fail(ErrorCode::config_mismatch,
             "checkpoint parameter " + std::to_string(i) + " does not match config");
      std::vector<double> data = jp.at("data").get<std::vector<double>>();
      if (data.size() != params[i]->value.size())
        fail(ErrorCode::config_mismatch,
             "checkpoint parameter " + params[i]->name + " has wrong size");
      params[i]->value = std::move(data);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::schema, std::string("checkpoint params: ") + e.what());
    }
  }
  return m;
}

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path);
  out << "model,depth,epoch,split,loss,accuracy\n";
  char buf[64];
  for (const MetricsRow& r : rows) {
    out << r.model << ',' << r.depth << ',' << r.epoch << ',' << r.split << ',';
    std::snprintf(buf, sizeof buf, "%.12g", r.loss);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.12g", r.accuracy);
    out << buf << '\n';
  }
  out.flush();
  if (!out) fail(ErrorCode::io, "write error on " + path);
}

}  // namespace floorgnn
