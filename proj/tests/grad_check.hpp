#pragma once

// Central finite-difference gradient oracle. Every analytic gradient in the
// test suite is compared against symmetric differences of the same scalar
// loss, evaluated through fresh tapes so no recorded state leaks between
// probes.
#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "floorgnn/tensor.hpp"

namespace floorgnn::testing {

inline double rel_err(double a, double b) {
  double scale = std::max({std::fabs(a), std::fabs(b), 1e-6});
  return std::fabs(a - b) / scale;
}

// Builds the loss from leaves created on the given tape, one per entry in
// `values` (row-major, shaped by `dims`).
using LossFn =
    std::function<Tensor(Tape&, const std::vector<Tensor>&)>;

struct GradCheckResult {
  double max_rel_err = 0.0;
  int n_checked = 0;
};

inline double eval_loss(const std::vector<std::pair<int, int>>& dims,
                        const std::vector<std::vector<double>>& values,
                        const LossFn& make_loss) {
  Tape tape;
  std::vector<Tensor> leaves;
  leaves.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i)
    leaves.push_back(
        tape.leaf(Tensor(dims[i].first, dims[i].second, values[i])));
  return make_loss(tape, leaves).value();
}

inline GradCheckResult grad_check(const std::vector<std::pair<int, int>>& dims,
                                  std::vector<std::vector<double>> values,
                                  const LossFn& make_loss, double h = 1e-5) {
  std::vector<std::vector<double>> analytic;
  {
    Tape tape;
    std::vector<Tensor> leaves;
    leaves.reserve(values.size());
    for (size_t i = 0; i < values.size(); ++i)
      leaves.push_back(
          tape.leaf(Tensor(dims[i].first, dims[i].second, values[i])));
    Tensor loss = make_loss(tape, leaves);
    tape.backward(loss);
    for (const Tensor& leaf : leaves) analytic.push_back(tape.grad(leaf));
  }

  GradCheckResult result;
  for (size_t i = 0; i < values.size(); ++i) {
    for (size_t j = 0; j < values[i].size(); ++j) {
      double saved = values[i][j];
      values[i][j] = saved + h;
      double up = eval_loss(dims, values, make_loss);
      values[i][j] = saved - h;
      double down = eval_loss(dims, values, make_loss);
      values[i][j] = saved;
      double fd = (up - down) / (2.0 * h);
      result.max_rel_err =
          std::max(result.max_rel_err, rel_err(analytic[i][j], fd));
      ++result.n_checked;
    }
  }
  return result;
}

}  // namespace floorgnn::testing
