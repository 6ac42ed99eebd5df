#pragma once

#include <functional>
#include <vector>

#include "floorgnn/error.hpp"

namespace floorgnn {

// Dense row-major 2-D tensor of doubles. `node` ties the value to a Tape
// entry when the value participates in gradient recording; -1 marks a
// constant with no gradient path.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;
  int node = -1;

  Tensor() = default;
  Tensor(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}
  Tensor(int r, int c, std::vector<double> d);

  static Tensor scalar(double v);

  int numel() const { return rows * cols; }
  bool is_scalar() const { return rows == 1 && cols == 1; }
  bool tracked() const { return node >= 0; }
  double value() const;  // E_NOT_SCALAR unless 1x1

  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
};

// Reverse-mode tape. Ops append nodes in execution order; backward() visits
// them exactly once in reverse. One tape records one forward pass and may be
// differentiated once (a second backward is E_TAPE_CONSUMED).
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Registers a differentiable leaf (parameter).
  Tensor leaf(const Tensor& value);

  Tensor matmul(const Tensor& a, const Tensor& b);
  Tensor add(const Tensor& a, const Tensor& b);
  Tensor sub(const Tensor& a, const Tensor& b);
  Tensor mul(const Tensor& a, const Tensor& b);
  Tensor div(const Tensor& a, const Tensor& b);
  Tensor scalar_mul(const Tensor& a, double s);
  Tensor add_bias(const Tensor& a, const Tensor& bias);  // bias broadcast over rows
  Tensor relu(const Tensor& a);
  Tensor leaky_relu(const Tensor& a, double slope);
  Tensor exp(const Tensor& a);
  Tensor log(const Tensor& a);
  Tensor concat_cols(const Tensor& a, const Tensor& b);
  Tensor gather_rows(const Tensor& a, const std::vector<int>& idx);
  Tensor segment_sum(const Tensor& a, const std::vector<int>& seg, int n_segments);
  // Empty segments yield all-zero rows.
  Tensor segment_mean(const Tensor& a, const std::vector<int>& seg, int n_segments);
  Tensor row_scale(const Tensor& a, const Tensor& s);  // s: M x 1, scales row i by s[i]
  // out[dst[e]] += coef[e] * a[src[e]]; the sparse propagation kernel behind
  // the message-passing layers. coef is constant (no gradient path).
  Tensor weighted_gather_sum(const Tensor& a, const std::vector<int>& dst,
                             const std::vector<int>& src,
                             const std::vector<double>& coef, int n_out);
  Tensor sum_all(const Tensor& a);
  // Mean over rows of -log softmax(logits)[i, labels[i]], max-stabilized.
  Tensor softmax_cross_entropy(const Tensor& logits, const std::vector<int>& labels);

  void backward(const Tensor& loss);

  // Gradient of the last backward() w.r.t. tensor t; zeros if t never
  // influenced the loss. t must be a tape node.
  std::vector<double> grad(const Tensor& t) const;

  size_t size() const { return nodes_.size(); }

 private:
  using BackFn = std::function<void(const std::vector<double>&, Tape&)>;

  struct Node {
    int numel = 0;
    BackFn back;  // empty for leaves
  };

  int push(int numel, BackFn back);
  std::vector<double>& gbuf(int id) { return grads_[id]; }

  std::vector<Node> nodes_;
  std::vector<std::vector<double>> grads_;
  bool consumed_ = false;
};

// Row-stable softmax of each row, values only.
void softmax_rows(const Tensor& logits, Tensor& out);

// Index of the row maximum; ties break toward the lowest index.
int argmax_row(const double* row, int c);

}  // namespace floorgnn
