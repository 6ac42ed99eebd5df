#include "floorgnn/optim.hpp"

#include <cmath>
#include <string>

#include "floorgnn/error.hpp"
#include "floorgnn/model.hpp"

namespace floorgnn {

AdamState AdamState::for_params(const std::vector<Param*>& params) {
  AdamState s;
  s.m.reserve(params.size());
  s.v.reserve(params.size());
  for (const Param* p : params) {
    size_t n = p->value.size();
    s.m.emplace_back(n, 0.0);
    s.v.emplace_back(n, 0.0);
  }
  return s;
}

void adam_step(const std::vector<Param*>& params,
               const std::vector<std::vector<double>>& grads, AdamState& state,
               double lr) {
  if (params.size() != grads.size() || params.size() != state.m.size())
    fail(ErrorCode::shape, "adam_step: parameter/gradient/state count mismatch");

  ++state.step_count;
  double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  for (size_t p = 0; p < params.size(); ++p) {
    std::vector<double>& w = params[p]->value;
    const std::vector<double>& g = grads[p];
    if (g.size() != w.size() || state.m[p].size() != w.size())
      fail(ErrorCode::shape, "adam_step: shape mismatch for parameter " +
                                 params[p]->name);
    for (size_t i = 0; i < w.size(); ++i) {
      state.m[p][i] = state.beta1 * state.m[p][i] + (1.0 - state.beta1) * g[i];
      state.v[p][i] = state.beta2 * state.v[p][i] + (1.0 - state.beta2) * g[i] * g[i];
      double m_hat = state.m[p][i] / bc1;
      double v_hat = state.v[p][i] / bc2;
      w[i] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
  }
}

double lr_at_epoch(const LrSchedule& s, int epoch) {
  return s.base_lr * std::pow(s.gamma, static_cast<double>(epoch / s.step_size));
}

}  // namespace floorgnn
