#include "tdebt/regress.hpp"

#include <cmath>

#include "tdebt/error.hpp"
#include "tdebt/svr.hpp"
#include "tdebt/text.hpp"

namespace tdebt {

const char* kind_name(RegressorKind kind) {
  switch (kind) {
    case RegressorKind::LinearRegression: return "linear_regression";
    case RegressorKind::RandomForest: return "random_forest";
    case RegressorKind::GradientBoost: return "gradient_boost";
    case RegressorKind::ExtraTrees: return "extra_trees";
    case RegressorKind::DecisionTree: return "decision_tree";
    case RegressorKind::Bagging: return "bagging";
    case RegressorKind::AdaBoost: return "adaboost";
    case RegressorKind::Svm: return "svm";
  }
  return "?";
}

const char* kind_display_name(RegressorKind kind) {
  switch (kind) {
    case RegressorKind::LinearRegression: return "Linear Regression";
    case RegressorKind::RandomForest: return "Random Forest";
    case RegressorKind::GradientBoost: return "Gradient Boost";
    case RegressorKind::ExtraTrees: return "Extra Trees";
    case RegressorKind::DecisionTree: return "Decision Trees";
    case RegressorKind::Bagging: return "Bagging";
    case RegressorKind::AdaBoost: return "AdaBoost";
    case RegressorKind::Svm: return "SVM";
  }
  return "?";
}

std::optional<RegressorKind> parse_kind(std::string_view name) {
  for (RegressorKind k : all_kinds())
    if (name == kind_name(k)) return k;
  return std::nullopt;
}

std::vector<RegressorKind> all_kinds() {
  return {RegressorKind::LinearRegression, RegressorKind::RandomForest,
          RegressorKind::GradientBoost,    RegressorKind::ExtraTrees,
          RegressorKind::DecisionTree,     RegressorKind::Bagging,
          RegressorKind::AdaBoost,         RegressorKind::Svm};
}

std::map<std::string, double> default_hyperparameters(RegressorKind kind) {
  switch (kind) {
    case RegressorKind::LinearRegression:
      return {};
    case RegressorKind::DecisionTree:
      return {{"max_depth", 0}, {"min_samples_leaf", 1}};
    case RegressorKind::RandomForest:
      // feature_subsample 0 = ceil(P/3) candidate features per node
      return {{"n_estimators", 100}, {"bootstrap", 1},        {"max_depth", 0},
              {"min_samples_leaf", 1}, {"feature_subsample", 0}};
    case RegressorKind::ExtraTrees:
      return {{"n_estimators", 100},   {"bootstrap", 0},
              {"max_depth", 0},        {"min_samples_leaf", 1},
              {"feature_subsample", 0}, {"random_thresholds", 1}};
    case RegressorKind::Bagging:
      return {{"n_estimators", 100}, {"bootstrap", 1}, {"max_depth", 0},
              {"min_samples_leaf", 1}};
    case RegressorKind::GradientBoost:
      return {{"n_estimators", 100}, {"learning_rate", 0.1}, {"max_depth", 3},
              {"min_samples_leaf", 1}};
    case RegressorKind::AdaBoost:
      return {{"n_estimators", 50}, {"learning_rate", 1}, {"max_depth", 3},
              {"min_samples_leaf", 1}};
    case RegressorKind::Svm:
      return {{"C", 1}, {"epsilon", 0.1}, {"max_iter", 1000}, {"tol", 1e-4},
              {"standardize", 1}};
  }
  return {};
}

namespace {

std::map<std::string, double> resolve_hyperparameters(const RegressorConfig& config) {
  auto hp = default_hyperparameters(config.kind);
  for (const auto& [key, value] : config.hyperparameters) {
    auto it = hp.find(key);
    if (it == hp.end())
      throw Error(ErrorKind::Config, std::string("hyperparameter '") + key +
                                         "' not applicable to " + kind_name(config.kind));
    it->second = value;
  }
  return hp;
}

double get(const std::map<std::string, double>& hp, const char* key) {
  return hp.at(key);
}

std::size_t get_count(const std::map<std::string, double>& hp, const char* key,
                      std::size_t minimum) {
  double v = get(hp, key);
  if (!(v >= 0) || v != std::floor(v) || v > 1e15)
    throw Error(ErrorKind::Config,
                std::string("hyperparameter '") + key + "' must be a non-negative integer");
  auto n = static_cast<std::size_t>(v);
  if (n < minimum)
    throw Error(ErrorKind::Config, std::string("hyperparameter '") + key + "' must be >= " +
                                       std::to_string(minimum));
  return n;
}

bool get_flag(const std::map<std::string, double>& hp, const char* key) {
  double v = get(hp, key);
  if (v != 0.0 && v != 1.0)
    throw Error(ErrorKind::Config, std::string("hyperparameter '") + key + "' must be 0 or 1");
  return v == 1.0;
}

CartParams tree_params(const std::map<std::string, double>& hp, std::size_t p,
                       std::size_t default_subsample) {
  CartParams params;
  params.max_depth = get_count(hp, "max_depth", 0);
  params.min_samples_leaf = get_count(hp, "min_samples_leaf", 1);
  params.feature_subsample = p;
  if (hp.count("feature_subsample")) {
    std::size_t raw = get_count(hp, "feature_subsample", 0);
    params.feature_subsample = raw == 0 ? default_subsample : std::min(raw, p);
  }
  if (hp.count("random_thresholds") && get_flag(hp, "random_thresholds"))
    params.threshold_mode = ThresholdMode::Random;
  return params;
}

std::vector<double> predict_linear(const LinearModel& m, const Matrix& x) {
  std::vector<double> out(x.rows(), m.intercept);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) out[i] += m.coefficients[j] * x(i, j);
  return out;
}

std::vector<double> predict_forest(const ForestModel& m, const Matrix& x) {
  std::vector<double> out(x.rows(), 0.0);
  for (const Tree& tree : m.trees)
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] += tree.predict_row(x.row(i));
  const double count = static_cast<double>(m.trees.size());
  for (double& v : out) v /= count;
  return out;
}

std::vector<double> predict_boost(const BoostModel& m, const Matrix& x) {
  std::vector<double> out(x.rows(), m.base);
  for (const Tree& tree : m.stages)
    for (std::size_t i = 0; i < x.rows(); ++i)
      out[i] += m.learning_rate * tree.predict_row(x.row(i));
  return out;
}

std::vector<double> predict_svr(const SvrModel& m, const Matrix& x) {
  std::vector<double> out(x.rows(), m.bias);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      out[i] += m.weights[j] * (x(i, j) - m.feature_mean[j]) / m.feature_scale[j];
  return out;
}

void check_finite(const Matrix& x, std::span<const double> y) {
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (!std::isfinite(x(i, j)))
        throw Error(ErrorKind::Precondition,
                    "fit: non-finite feature value at row " + std::to_string(i) +
                        ", column " + std::to_string(j) + " (impute first?)");
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!std::isfinite(y[i]))
      throw Error(ErrorKind::Precondition,
                  "fit: non-finite target at row " + std::to_string(i));
}

}  // namespace

FittedModel fit(const RegressorConfig& config, const Matrix& x, std::span<const double> y,
                std::vector<std::string> feature_names) {
  if (x.rows() < 2) throw Error(ErrorKind::Precondition, "fit: need at least 2 rows");
  if (x.rows() != y.size())
    throw Error(ErrorKind::Shape, "fit: row count " + std::to_string(x.rows()) +
                                      " != target length " + std::to_string(y.size()));
  if (!feature_names.empty() && feature_names.size() != x.cols())
    throw Error(ErrorKind::Shape, "fit: feature_names length != column count");
  check_finite(x, y);

  const auto hp = resolve_hyperparameters(config);
  const std::size_t p = x.cols();

  FittedModel model;
  model.kind = config.kind;
  if (feature_names.empty()) {
    for (std::size_t j = 0; j < p; ++j) model.feature_names.push_back("f" + std::to_string(j));
  } else {
    model.feature_names = std::move(feature_names);
  }

  switch (config.kind) {
    case RegressorKind::LinearRegression: {
      model.state = fit_linear(x, y);
      break;
    }
    case RegressorKind::DecisionTree: {
      CartParams params = tree_params(hp, p, p);
      params.seed = config.seed;
      model.state = fit_cart(x, y, params);
      break;
    }
    case RegressorKind::RandomForest: {
      const std::size_t third = (p + 2) / 3;  // ceil(P/3)
      model.state = fit_forest(x, y, get_count(hp, "n_estimators", 1),
                               get_flag(hp, "bootstrap"),
                               tree_params(hp, p, std::max<std::size_t>(third, 1)),
                               config.seed);
      break;
    }
    case RegressorKind::ExtraTrees: {
      model.state = fit_forest(x, y, get_count(hp, "n_estimators", 1),
                               get_flag(hp, "bootstrap"), tree_params(hp, p, p), config.seed);
      break;
    }
    case RegressorKind::Bagging: {
      model.state = fit_forest(x, y, get_count(hp, "n_estimators", 1),
                               get_flag(hp, "bootstrap"), tree_params(hp, p, p), config.seed);
      break;
    }
    case RegressorKind::GradientBoost: {
      const double lr = get(hp, "learning_rate");
      if (!(lr >= 0) || !std::isfinite(lr))
        throw Error(ErrorKind::Config, "hyperparameter 'learning_rate' must be >= 0");
      model.state = fit_gradient_boost(x, y, get_count(hp, "n_estimators", 1), lr,
                                       tree_params(hp, p, p), config.seed);
      break;
    }
    case RegressorKind::AdaBoost: {
      const double lr = get(hp, "learning_rate");
      if (!(lr > 0) || !std::isfinite(lr))
        throw Error(ErrorKind::Config, "hyperparameter 'learning_rate' must be > 0");
      model.state = fit_adaboost_r2(x, y, get_count(hp, "n_estimators", 1), lr,
                                    tree_params(hp, p, p), config.seed);
      break;
    }
    case RegressorKind::Svm: {
      SvrParams params;
      params.c = get(hp, "C");
      params.epsilon = get(hp, "epsilon");
      params.max_iter = get_count(hp, "max_iter", 1);
      params.tol = get(hp, "tol");
      params.standardize = get_flag(hp, "standardize");
      params.seed = config.seed;
      if (!(params.c >= 0) || !std::isfinite(params.c))
        throw Error(ErrorKind::Config, "hyperparameter 'C' must be >= 0");
      if (!(params.epsilon >= 0) || !std::isfinite(params.epsilon))
        throw Error(ErrorKind::Config, "hyperparameter 'epsilon' must be >= 0");
      if (!(params.tol > 0))
        throw Error(ErrorKind::Config, "hyperparameter 'tol' must be > 0");
      model.state = fit_svr(x, y, params);
      break;
    }
  }
  return model;
}

std::vector<double> predict(const FittedModel& model, const Matrix& x) {
  if (x.cols() != model.feature_names.size())
    throw Error(ErrorKind::Shape, "predict: matrix has " + std::to_string(x.cols()) +
                                      " columns, model expects " +
                                      std::to_string(model.feature_names.size()));
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j)
      if (!std::isfinite(x(i, j)))
        throw Error(ErrorKind::Precondition,
                    "predict: non-finite feature value at row " + std::to_string(i));

  return std::visit(
      [&](const auto& state) -> std::vector<double> {
        using T = std::decay_t<decltype(state)>;
        if constexpr (std::is_same_v<T, LinearModel>) return predict_linear(state, x);
        else if constexpr (std::is_same_v<T, Tree>) return predict_tree(state, x);
        else if constexpr (std::is_same_v<T, ForestModel>) return predict_forest(state, x);
        else if constexpr (std::is_same_v<T, BoostModel>) return predict_boost(state, x);
        else if constexpr (std::is_same_v<T, AdaBoostModel>) return predict_adaboost(state, x);
        else return predict_svr(state, x);
      },
      model.state);
}

}  // namespace tdebt
