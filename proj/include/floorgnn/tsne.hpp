#pragma once

#include <cstdint>
#include <vector>

namespace floorgnn {

struct TsneConfig {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  int exaggeration_iters = 250;
  double momentum_initial = 0.5;
  double momentum_final = 0.8;
  int momentum_switch_iter = 250;
  uint64_t seed = 0;
};

struct Affinities {
  std::vector<double> p;               // n x n symmetric, sums to 1
  std::vector<double> row_perplexity;  // achieved perplexity per point
};

// Per-point Gaussian bandwidths found by binary search (<= 50 iterations,
// perplexity matched within 1e-5), then symmetrized: P = (P + P^T) / 2n.
Affinities tsne_affinities(const std::vector<double>& x, int n, int d,
                           double perplexity);

// Exact O(n^2) t-SNE to 2-D. Student-t low-dimensional kernel, early
// exaggeration, momentum 0.5 switching to 0.8. Deterministic in cfg.seed.
// Returns n x 2 row-major coordinates.
std::vector<double> tsne_embed(const std::vector<double>& x, int n, int d,
                               const TsneConfig& cfg);

}  // namespace floorgnn
