#include <Eigen/Dense>

#include "tdebt/regress.hpp"

namespace tdebt {

// Least squares on centered columns; the centered system is solved by a
// complete orthogonal decomposition, which yields the minimum-norm solution
// on rank-deficient data instead of failing.
LinearModel fit_linear(const Matrix& x, std::span<const double> y) {
  const auto n = static_cast<Eigen::Index>(x.rows());
  const auto p = static_cast<Eigen::Index>(x.cols());

  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) target(i) = y[static_cast<std::size_t>(i)];
  const double y_mean = target.mean();

  Eigen::MatrixXd a(n, p);
  Eigen::VectorXd col_mean(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      sum += x(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    col_mean(j) = sum / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i)
      a(i, j) = x(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) - col_mean(j);
  }

  Eigen::VectorXd w = p == 0 ? Eigen::VectorXd(0)
                             : Eigen::VectorXd(a.completeOrthogonalDecomposition().solve(
                                   (target.array() - y_mean).matrix()));

  LinearModel model;
  model.coefficients.assign(w.data(), w.data() + w.size());
  model.intercept = y_mean - col_mean.dot(w);
  return model;
}

}  // namespace tdebt
