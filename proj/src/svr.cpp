#include "tdebt/svr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tdebt/rng.hpp"

namespace tdebt {

// Dual coordinate descent for the box-constrained dual
//   min over beta in [-C, C]^n : 1/2 beta^T Q beta - y^T beta + eps * |beta|_1
// with Q_ij = z_i . z_j over the standardized rows (bias handled as an extra
// all-ones column, so it is lightly regularized). w = sum_i beta_i z_i.
SvrModel fit_svr(const Matrix& x, std::span<const double> y, const SvrParams& params) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();

  SvrModel model;
  model.feature_mean.assign(p, 0.0);
  model.feature_scale.assign(p, 1.0);
  if (params.standardize) {
    for (std::size_t j = 0; j < p; ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += x(i, j);
      const double mean = sum / static_cast<double>(n);
      double var = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = x(i, j) - mean;
        var += d * d;
      }
      const double sd = std::sqrt(var / static_cast<double>(n));
      model.feature_mean[j] = mean;
      model.feature_scale[j] = sd > 0.0 ? sd : 1.0;
    }
  }

  model.weights.assign(p, 0.0);
  model.bias = 0.0;
  if (params.c <= 0.0) return model;  // regularizer-only objective

  // Standardized rows with the trailing bias column.
  Matrix z(n, p + 1);
  std::vector<double> row_sq(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const double v = (x(i, j) - model.feature_mean[j]) / model.feature_scale[j];
      z(i, j) = v;
      row_sq[i] += v * v;
    }
    z(i, p) = 1.0;
    row_sq[i] += 1.0;
  }

  std::vector<double> beta(n, 0.0);
  std::vector<double> w(p + 1, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(params.seed);

  model.converged = false;
  for (std::size_t epoch = 0; epoch < params.max_iter; ++epoch) {
    rng.shuffle(order);
    double max_violation = 0.0;
    for (std::size_t i : order) {
      if (row_sq[i] <= 0.0) continue;
      double g = -y[i];
      for (std::size_t j = 0; j <= p; ++j) g += w[j] * z(i, j);
      const double gp = g + params.epsilon;
      const double gn = g - params.epsilon;

      double violation = 0.0;
      if (beta[i] == 0.0) {
        if (gp < 0.0)
          violation = -gp;
        else if (gn > 0.0)
          violation = gn;
      } else if (beta[i] >= params.c) {
        if (gp > 0.0) violation = gp;
      } else if (beta[i] <= -params.c) {
        if (gn < 0.0) violation = -gn;
      } else if (beta[i] > 0.0) {
        violation = std::abs(gp);
      } else {
        violation = std::abs(gn);
      }
      max_violation = std::max(max_violation, violation);

      // Newton step on the one-dimensional piecewise quadratic.
      double d;
      if (gp < row_sq[i] * beta[i])
        d = -gp / row_sq[i];
      else if (gn > row_sq[i] * beta[i])
        d = -gn / row_sq[i];
      else
        d = -beta[i];
      if (std::abs(d) < 1e-12) continue;

      const double beta_old = beta[i];
      beta[i] = std::clamp(beta_old + d, -params.c, params.c);
      d = beta[i] - beta_old;
      if (d != 0.0)
        for (std::size_t j = 0; j <= p; ++j) w[j] += d * z(i, j);
    }
    if (max_violation < params.tol) {
      model.converged = true;
      break;
    }
  }

  model.weights.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
  model.bias = w[p];
  return model;
}

}  // namespace tdebt
