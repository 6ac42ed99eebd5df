#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "floorgnn/model.hpp"
#include "floorgnn/optim.hpp"

namespace floorgnn {

struct TrainConfig {
  int epochs = 100;
  int batch_size = 128;  // graphs per batch; the last partial batch is kept
  LrSchedule schedule{0.004, 10, 0.8};
  uint64_t seed = 0;
  bool shuffle_each_epoch = true;
  // 0 = test metrics at the final epoch only (when a test set is supplied)
  int eval_every = 0;
};

struct MetricsRow {
  std::string model;
  int depth = 0;
  int epoch = 0;
  std::string split;  // "train" | "test"
  double loss = 0.0;
  double accuracy = 0.0;
};

// Mini-batch training: per epoch, seeded shuffle, batches of batch_size
// graphs, mean node cross-entropy, Adam with the stepped learning rate.
// Emits one train row per epoch; test rows per eval_every when test_graphs
// is given. Deterministic in cfg.seed.
std::vector<MetricsRow> train(Model& m, const std::vector<RoomGraph>& graphs,
                              const TrainConfig& cfg,
                              const std::vector<RoomGraph>* test_graphs = nullptr);

// Micro accuracy: correct nodes / total nodes pooled over all graphs; loss is
// the pooled mean node cross-entropy. Argmax ties break toward the lowest
// class index.
std::pair<double, double> evaluate_accuracy(const Model& m,
                                            const std::vector<RoomGraph>& graphs);

// Trains one model per (kind, depth) cell and emits the final train and test
// rows for each. Per-cell seeds are derived from (cfg.seed, kind, depth), so
// any cell can be reproduced alone.
std::vector<MetricsRow> depth_sweep(const std::vector<ModelKind>& kinds,
                                    const std::vector<int>& depths,
                                    const std::vector<RoomGraph>& train_graphs,
                                    const std::vector<RoomGraph>& test_graphs,
                                    const TrainConfig& cfg, const ModelConfig& proto);

// Single self-describing JSON document; parameters round-trip bit-exactly.
void save_checkpoint(const Model& m, const std::string& path);
Model load_checkpoint(const std::string& path);

// header: model,depth,epoch,split,loss,accuracy
void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path);

}  // namespace floorgnn
