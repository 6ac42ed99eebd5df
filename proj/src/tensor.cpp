#include "floorgnn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace floorgnn {

namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows != b.rows || a.cols != b.cols)
    fail(ErrorCode::shape, std::string(op) + ": shape mismatch " +
                               std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                               " vs " + std::to_string(b.rows) + "x" +
                               std::to_string(b.cols));
}

}  // namespace

Tensor::Tensor(int r, int c, std::vector<double> d) : rows(r), cols(c), data(std::move(d)) {
  if (static_cast<int>(data.size()) != r * c)
    fail(ErrorCode::shape, "tensor data length does not match shape");
}

Tensor Tensor::scalar(double v) {
  Tensor t(1, 1);
  t.data[0] = v;
  return t;
}

double Tensor::value() const {
  if (!is_scalar()) fail(ErrorCode::not_scalar, "value() on non-scalar tensor");
  return data[0];
}

int Tape::push(int numel, BackFn back) {
  nodes_.push_back(Node{numel, std::move(back)});
  return static_cast<int>(nodes_.size()) - 1;
}

Tensor Tape::leaf(const Tensor& value) {
  Tensor t = value;
  t.node = push(t.numel(), nullptr);
  return t;
}

Tensor Tape::matmul(const Tensor& a, const Tensor& b) {
  if (a.cols != b.rows)
    fail(ErrorCode::shape, "matmul: " + std::to_string(a.rows) + "x" +
                               std::to_string(a.cols) + " * " + std::to_string(b.rows) +
                               "x" + std::to_string(b.cols));
  Tensor out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      double av = a.at(i, k);
      if (av == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) out.at(i, j) += av * b.at(k, j);
    }
  if (a.node < 0 && b.node < 0) return out;
  out.node = push(out.numel(), [a, b](const std::vector<double>& g, Tape& t) {
    if (a.node >= 0) {
      std::vector<double>& ga = t.gbuf(a.node);
      for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
          double gv = g[static_cast<size_t>(i) * b.cols + j];
          if (gv == 0.0) continue;
          for (int k = 0; k < a.cols; ++k)
            ga[static_cast<size_t>(i) * a.cols + k] += gv * b.at(k, j);
        }
    }
    if (b.node >= 0) {
      std::vector<double>& gb = t.gbuf(b.node);
      for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
          double av = a.at(i, k);
          if (av == 0.0) continue;
          for (int j = 0; j < b.cols; ++j)
            gb[static_cast<size_t>(k) * b.cols + j] +=
                av * g[static_cast<size_t>(i) * b.cols + j];
        }
    }
  });
  return out;
}

Tensor Tape::add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  Tensor out(a.rows, a.cols);
  for (int i = 0; i < out.numel(); ++i) out.data[i] = a.data[i] + b.data[i];
  if (a.node < 0 && b.node < 0) return out;
  int an = a.node, bn = b.node;
  out.node = push(out.numel(), [an, bn](const std::vector<double>& g, Tape& t) {
    if (an >= 0) {
      std::vector<double>& ga = t.gbuf(an);
      for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (bn >= 0) {
      std::vector<double>& gb = t.gbuf(bn);
      for (size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
    }
  });
  return out;
}

Tensor Tape::sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  Tensor out(a.rows, a.cols);
  for (int i = 0; i < out.numel(); ++i) out.data[i] = a.data[i] - b.data[i];
  if (a.node < 0 && b.node < 0) return out;
  int an = a.node, bn = b.node;
  out.node = push(out.numel(), [an, bn](const std::vector<double>& g, Tape& t) {
    if (an >= 0) {
      std::vector<double>& ga = t.gbuf(an);
      for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (bn >= 0) {
      std::vector<double>& gb = t.gbuf(bn);
      for (size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
  return out;
}

Tensor Tape::mul(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mul");
  Tensor out(a.rows, a.cols);
  for (int i = 0; i < out.numel(); ++i) out.data[i] = a.data[i] * b.data[i];
  if (a.node < 0 && b.node < 0) return out;
  out.node = push(out.numel(), [a, b](const std::vector<double>& g, Tape& t) {
    if (a.node >= 0) {
      std::vector<double>& ga = t.gbuf(a.node);
      for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * b.data[i];
    }
    if (b.node >= 0) {
      std::vector<double>& gb = t.gbuf(b.node);
      for (size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * a.data[i];
    }
  });
  return out;
}

Tensor Tape::div(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "div");
  Tensor out(a.rows, a.cols);
  for (int i = 0; i < out.numel(); ++i) out.data[i] = a.data[i] / b.data[i];
  if (a.node < 0 && b.node < 0) return out;
  out.node = push(out.numel(), [a, b](const std::vector<double>& g, Tape& t) {
    if (a.node >= 0) {
      std::vector<double>& ga = t.gbuf(a.node);
      for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] / b.data[i];
    }
    if (b.node >= 0) {
      std::vector<double>& gb = t.gbuf(b.node);
      for (size_t i = 0; i < g.size(); ++i)
        gb[i] -= g[i] * a.data[i] / (b.data[i] * b.data[i]);
    }
  });
  return out;
}

Tensor Tape::scalar_mul(const Tensor& a, double s) {
  Tensor out(a.rows, a.cols);
  for (int i = 0; i < out.numel(); ++i) out.data[i] = a.data[i] * s;
  if (a.node < 0) return out;
  int an = a.node;
  out.node = push(out.numel(), [an, s](const std::vector<double>& g, Tape& t) {
    std::vector<double>& ga = t.gbuf(an);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * s;
  });
  return out;
}

Tensor Tape::add_bias(const Tensor& a, const Tensor& bias) {
  if (bias.rows != 1 || bias.cols != a.cols)
    fail(ErrorCode::shape, "add_bias: bias must be 1x" + std::to_string(a.cols));
  Tensor out(a.rows, a.cols);
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c) out.at(r, c) = a.at(r, c) + bias.data[c];
  if (a.node < 0 && bias.node < 0) return out;
  int an = a.node, bn = bias.node, rows = a.rows, cols = a.cols;
  out.node = push(out.numel(), [an, bn, rows, cols](const std::vector<double>& g, Tape& t) {
    if (an >= 0) {
      std::vector<double>& ga = t.gbuf(an);
      for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (bn >= 0) {
      std::vector<double>& gb = t.gbuf(bn);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) gb[c] += g[static_cast<size_t>(r) * cols + c];
    }
  });
  return out;
}

Tensor Tape::relu(const Tensor& a) {
  Tensor out(a.rows, a.cols);
  for (int i = 0; i < out.numel(); ++i) out.data[i] = a.data[i] > 0.0 ? a.data[i] : 0.0;
  if (a.node < 0) return out;
  out.node = push(out.numel(), [a](const std::vector<double>& g, Tape& t) {
    std::vector<double>& ga = t.gbuf(a.node);
    for (size_t i = 0; i < g.size(); ++i)
      if (a.data[i] > 0.0) ga[i] += g[i];
  });
  return out;
}

Tensor Tape::leaky_relu(const Tensor& a, double slope) {
  Tensor out(a.rows, a.cols);
  for (int i = 0; i < out.numel(); ++i)
    out.data[i] = a.data[i] > 0.0 ? a.data[i] : slope * a.data[i];
  if (a.node < 0) return out;
  out.node = push(out.numel(), [a, slope](const std::vector<double>& g, Tape& t) {
    std::vector<double>& ga = t.gbuf(a.node);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (a.data[i] > 0.0 ? 1.0 : slope);
  });
  return out;
}

Tensor Tape::exp(const Tensor& a) {
  Tensor out(a.rows, a.cols);
  for (int i = 0; i < out.numel(); ++i) out.data[i] = std::exp(a.data[i]);
  if (a.node < 0) return out;
  int an = a.node;
  std::vector<double> saved = out.data;
  out.node = push(out.numel(), [an, saved](const std::vector<double>& g, Tape& t) {
    std::vector<double>& ga = t.gbuf(an);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * saved[i];
  });
  return out;
}

Tensor Tape::log(const Tensor& a) {
  Tensor out(a.rows, a.cols);
  for (int i = 0; i < out.numel(); ++i) out.data[i] = std::log(a.data[i]);
  if (a.node < 0) return out;
  out.node = push(out.numel(), [a](const std::vector<double>& g, Tape& t) {
    std::vector<double>& ga = t.gbuf(a.node);
    for (size_t i = 0; i < g.size(); ++i) ga[i] += g[i] / a.data[i];
  });
  return out;
}

Tensor Tape::concat_cols(const Tensor& a, const Tensor& b) {
  if (a.rows != b.rows)
    fail(ErrorCode::shape, "concat_cols: row mismatch " + std::to_string(a.rows) +
                               " vs " + std::to_string(b.rows));
  Tensor out(a.rows, a.cols + b.cols);
  for (int r = 0; r < a.rows; ++r) {
    for (int c = 0; c < a.cols; ++c) out.at(r, c) = a.at(r, c);
    for (int c = 0; c < b.cols; ++c) out.at(r, a.cols + c) = b.at(r, c);
  }
  if (a.node < 0 && b.node < 0) return out;
  int an = a.node, bn = b.node, rows = a.rows, ac = a.cols, bc = b.cols;
  out.node = push(out.numel(), [an, bn, rows, ac, bc](const std::vector<double>& g, Tape& t) {
    int oc = ac + bc;
    if (an >= 0) {
      std::vector<double>& ga = t.gbuf(an);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < ac; ++c)
          ga[static_cast<size_t>(r) * ac + c] += g[static_cast<size_t>(r) * oc + c];
    }
    if (bn >= 0) {
      std::vector<double>& gb = t.gbuf(bn);
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < bc; ++c)
          gb[static_cast<size_t>(r) * bc + c] += g[static_cast<size_t>(r) * oc + ac + c];
    }
  });
  return out;
}

Tensor Tape::gather_rows(const Tensor& a, const std::vector<int>& idx) {
  for (int i : idx)
    if (i < 0 || i >= a.rows)
      fail(ErrorCode::bad_index, "gather_rows: index " + std::to_string(i) +
                                     " out of range for " + std::to_string(a.rows) +
                                     " rows");
  Tensor out(static_cast<int>(idx.size()), a.cols);
  for (size_t k = 0; k < idx.size(); ++k)
    for (int c = 0; c < a.cols; ++c) out.at(static_cast<int>(k), c) = a.at(idx[k], c);
  if (a.node < 0) return out;
  int an = a.node, cols = a.cols;
  out.node = push(out.numel(), [an, cols, idx](const std::vector<double>& g, Tape& t) {
    std::vector<double>& ga = t.gbuf(an);
    for (size_t k = 0; k < idx.size(); ++k)
      for (int c = 0; c < cols; ++c)
        ga[static_cast<size_t>(idx[k]) * cols + c] += g[k * cols + c];
  });
  return out;
}

Tensor Tape::segment_sum(const Tensor& a, const std::vector<int>& seg, int n_segments) {
  if (static_cast<int>(seg.size()) != a.rows)
    fail(ErrorCode::shape, "segment_sum: segment list length != rows");
  for (int s : seg)
    if (s < 0 || s >= n_segments)
      fail(ErrorCode::bad_index, "segment_sum: segment " + std::to_string(s) +
                                     " out of range for " + std::to_string(n_segments));
  Tensor out(n_segments, a.cols);
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c) out.at(seg[r], c) += a.at(r, c);
  if (a.node < 0) return out;
  int an = a.node, cols = a.cols;
  out.node = push(out.numel(), [an, cols, seg](const std::vector<double>& g, Tape& t) {
    std::vector<double>& ga = t.gbuf(an);
    for (size_t r = 0; r < seg.size(); ++r)
      for (int c = 0; c < cols; ++c)
        ga[r * cols + c] += g[static_cast<size_t>(seg[r]) * cols + c];
  });
  return out;
}

Tensor Tape::segment_mean(const Tensor& a, const std::vector<int>& seg, int n_segments) {
  if (static_cast<int>(seg.size()) != a.rows)
    fail(ErrorCode::shape, "segment_mean: segment list length != rows");
  for (int s : seg)
    if (s < 0 || s >= n_segments)
      fail(ErrorCode::bad_index, "segment_mean: segment " + std::to_string(s) +
                                     " out of range for " + std::to_string(n_segments));
  std::vector<double> count(static_cast<size_t>(n_segments), 0.0);
  for (int s : seg) count[s] += 1.0;
  Tensor out(n_segments, a.cols);
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c) out.at(seg[r], c) += a.at(r, c) / count[seg[r]];
  if (a.node < 0) return out;
  int an = a.node, cols = a.cols;
  out.node =
      push(out.numel(), [an, cols, seg, count](const std::vector<double>& g, Tape& t) {
        std::vector<double>& ga = t.gbuf(an);
        for (size_t r = 0; r < seg.size(); ++r)
          for (int c = 0; c < cols; ++c)
            ga[r * cols + c] +=
                g[static_cast<size_t>(seg[r]) * cols + c] / count[seg[r]];
      });
  return out;
}

Tensor Tape::row_scale(const Tensor& a, const Tensor& s) {
  if (s.rows != a.rows || s.cols != 1)
    fail(ErrorCode::shape, "row_scale: scale must be " + std::to_string(a.rows) + "x1");
  Tensor out(a.rows, a.cols);
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c) out.at(r, c) = a.at(r, c) * s.data[r];
  if (a.node < 0 && s.node < 0) return out;
  out.node = push(out.numel(), [a, s](const std::vector<double>& g, Tape& t) {
    if (a.node >= 0) {
      std::vector<double>& ga = t.gbuf(a.node);
      for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < a.cols; ++c)
          ga[static_cast<size_t>(r) * a.cols + c] +=
              g[static_cast<size_t>(r) * a.cols + c] * s.data[r];
    }
    if (s.node >= 0) {
      std::vector<double>& gs = t.gbuf(s.node);
      for (int r = 0; r < a.rows; ++r) {
        double acc = 0.0;
        for (int c = 0; c < a.cols; ++c)
          acc += g[static_cast<size_t>(r) * a.cols + c] * a.at(r, c);
        gs[r] += acc;
      }
    }
  });
  return out;
}

Tensor Tape::weighted_gather_sum(const Tensor& a, const std::vector<int>& dst,
                                 const std::vector<int>& src,
                                 const std::vector<double>& coef, int n_out) {
  if (dst.size() != src.size() || dst.size() != coef.size())
    fail(ErrorCode::shape, "weighted_gather_sum: dst/src/coef length mismatch");
  for (size_t e = 0; e < dst.size(); ++e) {
    if (dst[e] < 0 || dst[e] >= n_out)
      fail(ErrorCode::bad_index, "weighted_gather_sum: dst out of range");
    if (src[e] < 0 || src[e] >= a.rows)
      fail(ErrorCode::bad_index, "weighted_gather_sum: src out of range");
  }
  Tensor out(n_out, a.cols);
  for (size_t e = 0; e < dst.size(); ++e)
    for (int c = 0; c < a.cols; ++c) out.at(dst[e], c) += coef[e] * a.at(src[e], c);
  if (a.node < 0) return out;
  int an = a.node, cols = a.cols;
  out.node = push(out.numel(),
                  [an, cols, dst, src, coef](const std::vector<double>& g, Tape& t) {
                    std::vector<double>& ga = t.gbuf(an);
                    for (size_t e = 0; e < dst.size(); ++e)
                      for (int c = 0; c < cols; ++c)
                        ga[static_cast<size_t>(src[e]) * cols + c] +=
                            coef[e] * g[static_cast<size_t>(dst[e]) * cols + c];
                  });
  return out;
}

Tensor Tape::sum_all(const Tensor& a) {
  Tensor out(1, 1);
  for (double v : a.data) out.data[0] += v;
  if (a.node < 0) return out;
  int an = a.node, numel = a.numel();
  out.node = push(1, [an, numel](const std::vector<double>& g, Tape& t) {
    std::vector<double>& ga = t.gbuf(an);
    for (int i = 0; i < numel; ++i) ga[i] += g[0];
  });
  return out;
}

Tensor Tape::softmax_cross_entropy(const Tensor& logits, const std::vector<int>& labels) {
  if (static_cast<int>(labels.size()) != logits.rows)
    fail(ErrorCode::shape, "softmax_cross_entropy: label count != rows");
  for (int y : labels)
    if (y < 0 || y >= logits.cols)
      fail(ErrorCode::bad_index, "softmax_cross_entropy: label " + std::to_string(y) +
                                     " out of range for " + std::to_string(logits.cols) +
                                     " classes");
  if (logits.rows == 0)
    fail(ErrorCode::shape, "softmax_cross_entropy: empty logits");

  int n = logits.rows, c = logits.cols;
  std::vector<double> probs(static_cast<size_t>(n) * c);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* row = logits.data.data() + static_cast<size_t>(i) * c;
    double m = *std::max_element(row, row + c);
    double denom = 0.0;
    for (int j = 0; j < c; ++j) denom += std::exp(row[j] - m);
    for (int j = 0; j < c; ++j)
      probs[static_cast<size_t>(i) * c + j] = std::exp(row[j] - m) / denom;
    total += std::log(denom) - (row[labels[i]] - m);
  }
  Tensor out = Tensor::scalar(total / n);
  if (logits.node < 0) return out;
  int ln = logits.node;
  out.node = push(1, [ln, n, c, probs, labels](const std::vector<double>& g, Tape& t) {
    std::vector<double>& ga = t.gbuf(ln);
    double scale = g[0] / n;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < c; ++j)
        ga[static_cast<size_t>(i) * c + j] += scale * probs[static_cast<size_t>(i) * c + j];
      ga[static_cast<size_t>(i) * c + labels[i]] -= scale;
    }
  });
  return out;
}

void Tape::backward(const Tensor& loss) {
  if (!loss.is_scalar()) fail(ErrorCode::not_scalar, "backward: loss must be 1x1");
  if (!loss.tracked() || loss.node >= static_cast<int>(nodes_.size()))
    fail(ErrorCode::not_scalar, "backward: loss is not a node of this tape");
  if (consumed_)
    fail(ErrorCode::tape_consumed, "backward already ran on this tape");
  consumed_ = true;

  grads_.resize(nodes_.size());
  for (size_t i = 0; i < nodes_.size(); ++i)
    grads_[i].assign(static_cast<size_t>(nodes_[i].numel), 0.0);
  grads_[loss.node][0] = 1.0;
  for (size_t i = nodes_.size(); i-- > 0;)
    if (nodes_[i].back) nodes_[i].back(grads_[i], *this);
}

std::vector<double> Tape::grad(const Tensor& t) const {
  if (!t.tracked() || t.node >= static_cast<int>(nodes_.size()))
    fail(ErrorCode::bad_index, "grad: tensor is not a node of this tape");
  if (grads_.empty())
    return std::vector<double>(static_cast<size_t>(nodes_[t.node].numel), 0.0);
  return grads_[t.node];
}

void softmax_rows(const Tensor& logits, Tensor& out) {
  out = Tensor(logits.rows, logits.cols);
  for (int i = 0; i < logits.rows; ++i) {
    const double* row = logits.data.data() + static_cast<size_t>(i) * logits.cols;
    double m = *std::max_element(row, row + logits.cols);
    double denom = 0.0;
    for (int j = 0; j < logits.cols; ++j) denom += std::exp(row[j] - m);
    for (int j = 0; j < logits.cols; ++j) out.at(i, j) = std::exp(row[j] - m) / denom;
  }
}

int argmax_row(const double* row, int c) {
  int best = 0;
  for (int j = 1; j < c; ++j)
    if (row[j] > row[best]) best = j;
  return best;
}

}  // namespace floorgnn
