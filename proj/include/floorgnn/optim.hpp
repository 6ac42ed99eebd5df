#pragma once

#include <cstddef>
#include <vector>

namespace floorgnn {

struct Param;  // model.hpp

// Standard Adam with bias correction.
struct AdamState {
  std::vector<std::vector<double>> m;  // first moments, one per parameter
  std::vector<std::vector<double>> v;  // second moments
  long step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState for_params(const std::vector<Param*>& params);
};

void adam_step(const std::vector<Param*>& params,
               const std::vector<std::vector<double>>& grads, AdamState& state,
               double lr);

// Step decay: base_lr * gamma^floor(epoch / step_size).
struct LrSchedule {
  double base_lr = 0.004;
  int step_size = 10;
  double gamma = 0.8;
};

double lr_at_epoch(const LrSchedule& s, int epoch);

}  // namespace floorgnn
