#include "floorgnn/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "floorgnn/error.hpp"
#include "floorgnn/rng.hpp"

namespace floorgnn {

namespace {

// Pairwise squared Euclidean distances, n x n row-major.
std::vector<double> squared_distances(const std::vector<double>& x, int n, int d) {
  std::vector<double> dist(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double s = 0.0;
      const double* xi = x.data() + static_cast<size_t>(i) * d;
      const double* xj = x.data() + static_cast<size_t>(j) * d;
      for (int k = 0; k < d; ++k) {
        double diff = xi[k] - xj[k];
        s += diff * diff;
      }
      dist[static_cast<size_t>(i) * n + j] = s;
      dist[static_cast<size_t>(j) * n + i] = s;
    }
  }
  return dist;
}

// Conditional distribution p_{j|i} for one row at inverse-bandwidth beta;
// returns the achieved perplexity exp(H). Distances are shifted by the row
// minimum so at least one exponential stays at 1.
double row_conditional(const double* dist_row, int n, int i, double beta,
                       double* p_out) {
  double dmin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j)
    if (j != i) dmin = std::min(dmin, dist_row[j]);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    double v = j == i ? 0.0 : std::exp(-beta * (dist_row[j] - dmin));
    p_out[j] = v;
    sum += v;
  }
  double h = 0.0;  // entropy in nats
  for (int j = 0; j < n; ++j) {
    p_out[j] /= sum;
    if (p_out[j] > 0.0) h -= p_out[j] * std::log(p_out[j]);
  }
  return std::exp(h);
}

}  // namespace

Affinities tsne_affinities(const std::vector<double>& x, int n, int d,
                           double perplexity) {
  if (!(perplexity > 1.0) || !(perplexity < n))
    fail(ErrorCode::bad_perplexity,
         "perplexity " + std::to_string(perplexity) + " not in (1, " +
             std::to_string(n) + ")");
  if (static_cast<int>(x.size()) != n * d)
    fail(ErrorCode::shape, "tsne_affinities: data length != n*d");

  std::vector<double> dist = squared_distances(x, n, d);
  std::vector<double> cond(static_cast<size_t>(n) * n, 0.0);
  Affinities aff;
  aff.row_perplexity.resize(static_cast<size_t>(n));

  for (int i = 0; i < n; ++i) {
    const double* drow = dist.data() + static_cast<size_t>(i) * n;
    double* prow = cond.data() + static_cast<size_t>(i) * n;

    // Bracket the target, then bisect; at most 50 refinement steps.
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    double beta = 1.0;
    double perp = row_conditional(drow, n, i, beta, prow);
    for (int it = 0; it < 50 && std::abs(perp - perplexity) > 1e-5; ++it) {
      if (perp > perplexity) {  // too flat: narrow the kernel
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : (lo + hi) / 2.0;
      } else {
        hi = beta;
        beta = lo == 0.0 ? beta / 2.0 : (lo + hi) / 2.0;
      }
      perp = row_conditional(drow, n, i, beta, prow);
    }
    aff.row_perplexity[i] = perp;
  }

  // Symmetrize: P = (C + C^T) / 2n, which sums to exactly 1.
  aff.p.assign(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      aff.p[static_cast<size_t>(i) * n + j] =
          (cond[static_cast<size_t>(i) * n + j] + cond[static_cast<size_t>(j) * n + i]) /
          (2.0 * n);
  return aff;
}

std::vector<double> tsne_embed(const std::vector<double>& x, int n, int d,
                               const TsneConfig& cfg) {
  if (n < 3) fail(ErrorCode::bad_perplexity, "t-SNE needs at least 3 points");
  if (cfg.iterations < 1 || cfg.learning_rate <= 0.0 || cfg.early_exaggeration < 1.0)
    fail(ErrorCode::bad_config, "invalid t-SNE configuration");

  Affinities aff = tsne_affinities(x, n, d, cfg.perplexity);

  Rng rng(mix_seed(cfg.seed));
  std::vector<double> y(static_cast<size_t>(n) * 2);
  for (double& v : y) v = rng.normal(0.0, 1e-4);
  std::vector<double> vel(static_cast<size_t>(n) * 2, 0.0);
  std::vector<double> num(static_cast<size_t>(n) * n, 0.0);
  std::vector<double> grad(static_cast<size_t>(n) * 2, 0.0);

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    double exaggeration = iter < cfg.exaggeration_iters ? cfg.early_exaggeration : 1.0;
    double momentum =
        iter < cfg.momentum_switch_iter ? cfg.momentum_initial : cfg.momentum_final;

    // Student-t kernel numerators and normalizer.
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double dx = y[static_cast<size_t>(i) * 2] - y[static_cast<size_t>(j) * 2];
        double dy = y[static_cast<size_t>(i) * 2 + 1] - y[static_cast<size_t>(j) * 2 + 1];
        double q = 1.0 / (1.0 + dx * dx + dy * dy);
        num[static_cast<size_t>(i) * n + j] = q;
        num[static_cast<size_t>(j) * n + i] = q;
        z += 2.0 * q;
      }
    }

    std::fill(grad.begin(), grad.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        double nij = num[static_cast<size_t>(i) * n + j];
        double qij = nij / z;
        double pij = exaggeration * aff.p[static_cast<size_t>(i) * n + j];
        double mult = 4.0 * (pij - qij) * nij;
        grad[static_cast<size_t>(i) * 2] +=
            mult * (y[static_cast<size_t>(i) * 2] - y[static_cast<size_t>(j) * 2]);
        grad[static_cast<size_t>(i) * 2 + 1] +=
            mult * (y[static_cast<size_t>(i) * 2 + 1] - y[static_cast<size_t>(j) * 2 + 1]);
      }
    }

    for (size_t k = 0; k < y.size(); ++k) {
      vel[k] = momentum * vel[k] - cfg.learning_rate * grad[k];
      y[k] += vel[k];
    }

    // Keep the embedding centered.
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
      mx += y[static_cast<size_t>(i) * 2];
      my += y[static_cast<size_t>(i) * 2 + 1];
    }
    mx /= n;
    my /= n;
    for (int i = 0; i < n; ++i) {
      y[static_cast<size_t>(i) * 2] -= mx;
      y[static_cast<size_t>(i) * 2 + 1] -= my;
    }
  }
  return y;
}

}  // namespace floorgnn
