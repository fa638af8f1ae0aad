#include <algorithm>
#include <cmath>
#include <numeric>

#include "tdebt/error.hpp"
#include "tdebt/regress.hpp"
#include "tdebt/rng.hpp"

namespace tdebt {

namespace {

std::vector<std::size_t> bootstrap_rows(std::size_t n, Rng& rng) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = rng.next_index(n);
  return rows;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

// Draw n rows with probability proportional to weight, by inverse-CDF lookup.
std::vector<std::size_t> weighted_bootstrap(std::span<const double> weights, Rng& rng) {
  std::vector<double> cdf(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cdf[i] = acc;
  }
  std::vector<std::size_t> rows(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double u = rng.next_real() * acc;
    rows[i] = static_cast<std::size_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (rows[i] >= weights.size()) rows[i] = weights.size() - 1;
  }
  return rows;
}

}  // namespace

ForestModel fit_forest(const Matrix& x, std::span<const double> y, std::size_t n_estimators,
                       bool bootstrap, const CartParams& tree_params, std::uint64_t seed) {
  ForestModel model;
  model.trees.reserve(n_estimators);
  for (std::size_t t = 0; t < n_estimators; ++t) {
    // Per-estimator seed depends on position only, so training order (or a
    // future parallel trainer) cannot change the result.
    Rng sampler(mix_seed(seed, t));
    CartParams params = tree_params;
    params.seed = sampler.next_u64();
    std::vector<std::size_t> rows = bootstrap ? bootstrap_rows(x.rows(), sampler)
                                              : all_rows(x.rows());
    model.trees.push_back(fit_cart_rows(x, y, std::move(rows), params));
  }
  return model;
}

BoostModel fit_gradient_boost(const Matrix& x, std::span<const double> y,
                              std::size_t n_estimators, double learning_rate,
                              const CartParams& tree_params, std::uint64_t seed) {
  BoostModel model;
  model.learning_rate = learning_rate;
  double sum = 0.0;
  for (double v : y) sum += v;
  model.base = sum / static_cast<double>(y.size());

  std::vector<double> residual(y.begin(), y.end());
  for (double& r : residual) r -= model.base;

  model.stages.reserve(n_estimators);
  for (std::size_t stage = 0; stage < n_estimators; ++stage) {
    CartParams params = tree_params;
    params.seed = mix_seed(seed, stage);
    Tree tree = fit_cart(x, residual, params);
    for (std::size_t i = 0; i < x.rows(); ++i)
      residual[i] -= learning_rate * tree.predict_row(x.row(i));
    model.stages.push_back(std::move(tree));
  }
  return model;
}

AdaBoostModel fit_adaboost_r2(const Matrix& x, std::span<const double> y,
                              std::size_t n_estimators, double learning_rate,
                              const CartParams& tree_params, std::uint64_t seed) {
  const std::size_t n = x.rows();
  std::vector<double> weights(n, 1.0 / static_cast<double>(n));
  AdaBoostModel model;

  for (std::size_t stage = 0; stage < n_estimators; ++stage) {
    Rng sampler(mix_seed(seed, stage));
    CartParams params = tree_params;
    params.seed = sampler.next_u64();
    Tree tree = fit_cart_rows(x, y, weighted_bootstrap(weights, sampler), params);

    // Linear loss on the full sample, normalized by the largest error.
    std::vector<double> error(n);
    double error_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      error[i] = std::abs(tree.predict_row(x.row(i)) - y[i]);
      error_max = std::max(error_max, error[i]);
    }
    double avg_loss = 0.0;
    if (error_max > 0.0) {
      for (std::size_t i = 0; i < n; ++i) avg_loss += weights[i] * (error[i] / error_max);
    }

    if (avg_loss <= 0.0) {
      // Perfect stage: keep it with full confidence and stop.
      model.learners.push_back(std::move(tree));
      model.stage_log_weights.push_back(1.0);
      break;
    }
    if (avg_loss >= 0.5) {
      // Weak-learning condition broken; keep the stage only if it is the
      // first, otherwise discard it. Either way training halts here.
      if (model.learners.empty()) {
        model.learners.push_back(std::move(tree));
        model.stage_log_weights.push_back(1.0);
      }
      break;
    }

    const double beta = avg_loss / (1.0 - avg_loss);
    model.learners.push_back(std::move(tree));
    model.stage_log_weights.push_back(learning_rate * std::log(1.0 / beta));

    double weight_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      weights[i] *= std::pow(beta, (1.0 - error[i] / error_max) * learning_rate);
      weight_sum += weights[i];
    }
    for (double& w : weights) w /= weight_sum;
  }
  return model;
}

std::vector<double> predict_adaboost(const AdaBoostModel& model, const Matrix& x) {
  const std::size_t m = model.learners.size();
  std::vector<double> out(x.rows());
  std::vector<std::pair<double, double>> scored(m);  // (prediction, stage weight)
  double half_weight = 0.0;
  for (double w : model.stage_log_weights) half_weight += w;
  half_weight /= 2.0;

  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t t = 0; t < m; ++t)
      scored[t] = {model.learners[t].predict_row(x.row(i)), model.stage_log_weights[t]};
    std::sort(scored.begin(), scored.end());
    // Weighted median: smallest prediction whose cumulative weight reaches
    // half of the total.
    double acc = 0.0;
    double value = scored.empty() ? 0.0 : scored.back().first;
    for (const auto& [pred, w] : scored) {
      acc += w;
      if (acc >= half_weight) {
        value = pred;
        break;
      }
    }
    out[i] = value;
  }
  return out;
}

}  // namespace tdebt
