#pragma once

#include <cstdint>
#include <span>

#include "tdebt/regress.hpp"

namespace tdebt {

struct SvrParams {
  double c = 1.0;
  double epsilon = 0.1;
  std::size_t max_iter = 1000;  // coordinate-descent epochs
  double tol = 1e-4;
  bool standardize = true;
  std::uint64_t seed = 0;
};

/// Linear epsilon-insensitive SVR: minimizes 1/2 ||w||^2 + C * sum of
/// max(0, |w.x_i + b - y_i| - epsilon), solved by dual coordinate descent.
/// Non-convergence within max_iter is reported via SvrModel::converged, not
/// an error.
SvrModel fit_svr(const Matrix& x, std::span<const double> y, const SvrParams& params);

}  // namespace tdebt
