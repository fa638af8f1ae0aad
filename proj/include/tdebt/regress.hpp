#pragma once

// The eight regression families behind one fit/predict contract.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tdebt/cart.hpp"
#include "tdebt/matrix.hpp"

namespace tdebt {

enum class RegressorKind {
  LinearRegression,
  RandomForest,
  GradientBoost,
  ExtraTrees,
  DecisionTree,
  Bagging,
  AdaBoost,
  Svm,
};

/// Machine name used on the CLI and in serialized models.
const char* kind_name(RegressorKind kind);
/// Human name used in report tables.
const char* kind_display_name(RegressorKind kind);
std::optional<RegressorKind> parse_kind(std::string_view name);
std::vector<RegressorKind> all_kinds();

/// Baseline hyperparameters for each family (see configs/regressor_defaults.json
/// for the same values in data form). feature_subsample = 0 means the
/// kind-specific rule: ceil(P/3) for RandomForest, all P otherwise.
std::map<std::string, double> default_hyperparameters(RegressorKind kind);

struct RegressorConfig {
  RegressorKind kind = RegressorKind::LinearRegression;
  std::map<std::string, double> hyperparameters;  // overrides applied on defaults
  std::uint64_t seed = 42;
};

struct LinearModel {
  std::vector<double> coefficients;
  double intercept = 0.0;
};

/// Trees averaged uniformly (Bagging, RandomForest, ExtraTrees).
struct ForestModel {
  std::vector<Tree> trees;
};

/// Stagewise least-squares boosting: base + lr * sum of stage trees.
struct BoostModel {
  double base = 0.0;
  double learning_rate = 0.0;
  std::vector<Tree> stages;
};

/// AdaBoost.R2: prediction is the weighted median of the learners.
struct AdaBoostModel {
  std::vector<Tree> learners;
  std::vector<double> stage_log_weights;  // ln(1/beta) per kept learner
};

/// Linear epsilon-insensitive SVR in standardized feature space.
struct SvrModel {
  std::vector<double> weights;      // per standardized feature
  double bias = 0.0;
  std::vector<double> feature_mean;   // identity transform when standardize=false
  std::vector<double> feature_scale;
  bool converged = true;
};

struct FittedModel {
  RegressorKind kind = RegressorKind::LinearRegression;
  std::vector<std::string> feature_names;
  std::variant<LinearModel, Tree, ForestModel, BoostModel, AdaBoostModel, SvrModel> state;
};

/// Deterministic in (config, x, y) including the seed. feature_names may be
/// empty, in which case f0..f{P-1} are recorded.
FittedModel fit(const RegressorConfig& config, const Matrix& x, std::span<const double> y,
                std::vector<std::string> feature_names = {});

std::vector<double> predict(const FittedModel& model, const Matrix& x);

// Internals shared by fit and the tests.
LinearModel fit_linear(const Matrix& x, std::span<const double> y);
ForestModel fit_forest(const Matrix& x, std::span<const double> y, std::size_t n_estimators,
                       bool bootstrap, const CartParams& tree_params, std::uint64_t seed);
BoostModel fit_gradient_boost(const Matrix& x, std::span<const double> y,
                              std::size_t n_estimators, double learning_rate,
                              const CartParams& tree_params, std::uint64_t seed);
AdaBoostModel fit_adaboost_r2(const Matrix& x, std::span<const double> y,
                              std::size_t n_estimators, double learning_rate,
                              const CartParams& tree_params, std::uint64_t seed);
std::vector<double> predict_adaboost(const AdaBoostModel& model, const Matrix& x);

}  // namespace tdebt
