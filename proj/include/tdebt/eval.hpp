#pragma once

// Cross-validated scoring: MAE / R-squared rows with their fold standard
// deviations.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdebt/features.hpp"
#include "tdebt/regress.hpp"

namespace tdebt {

enum class Grouping { RowShuffle, ByProject };

const char* grouping_name(Grouping grouping);
std::optional<Grouping> parse_grouping(std::string_view name);

struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;  // fold index per row
  std::uint64_t seed = 0;
  Grouping grouping = Grouping::RowShuffle;
};

/// Mean absolute error, sum |actual - predicted| / n.
double mae(std::span<const double> actual, std::span<const double> predicted);

/// 1 - SS_res / SS_tot; negative when worse than predicting the mean.
/// Throws Error{UndefinedScore} when actual has zero variance.
double r_squared(std::span<const double> actual, std::span<const double> predicted);

/// RowShuffle: seeded shuffle, fold sizes differ by at most one. ByProject:
/// whole projects assigned greedily (largest first) to the emptiest fold;
/// the result depends only on group labels and counts, not row order.
FoldPlan make_folds(std::size_t n, std::size_t k, std::uint64_t seed, Grouping grouping,
                    std::span<const std::string> groups = {});

struct EvalRow {
  RegressorKind kind = RegressorKind::LinearRegression;
  double mae_mean = 0.0;
  double mae_std = 0.0;
  double r2_mean = 0.0;
  double r2_std = 0.0;
  std::vector<std::string> warnings;
};

struct EvalReport {
  TargetKind target_kind = TargetKind::Maintainability;
  std::vector<EvalRow> rows;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  Grouping grouping = Grouping::RowShuffle;
};

/// Per fold: impute from the training rows, fit, score the held-out rows.
/// Zero-variance test folds keep their MAE but are excluded from the R2
/// aggregate with a warning. Stds are unbiased (k - 1) over fold scores.
EvalRow cross_validate(const RegressorConfig& config, const DesignMatrix& matrix,
                       const FoldPlan& plan, unsigned threads = 1);

/// One row per config, order preserved, the same plan reused for every
/// regressor so rows are a paired comparison.
EvalReport evaluate_all(std::span<const RegressorConfig> configs, const DesignMatrix& matrix,
                        const FoldPlan& plan, unsigned threads = 1);

std::string render_report_markdown(const EvalReport& report);
std::string render_report_csv(const EvalReport& report);

}  // namespace tdebt
