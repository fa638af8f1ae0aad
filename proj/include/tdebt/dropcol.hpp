#pragma once

// Drop-column feature importance, with the exhaustive feature-subset search
// as its oracle for small P.

#include <map>
#include <string>
#include <vector>

#include "tdebt/eval.hpp"

namespace tdebt {

struct ImportanceEntry {
  std::string feature_name;
  double mae_delta = 0.0;  // mae without the feature minus baseline mae
  double r2_delta = 0.0;   // baseline r2 minus r2 without the feature
};

/// Signs are chosen so that bigger means more important for both metrics.
/// Deltas are not normalized; importance is not additive.
struct ImportanceReport {
  RegressorKind kind = RegressorKind::LinearRegression;
  double baseline_mae = 0.0;
  double baseline_r2 = 0.0;
  std::vector<ImportanceEntry> entries;  // matrix feature order
  std::size_t k = 0;
  std::uint64_t seed = 0;
};

/// Baseline on the full matrix, then one retrained evaluation per dropped
/// feature, all under the identical plan and seeds.
ImportanceReport drop_column_importance(const RegressorConfig& config,
                                        const DesignMatrix& matrix, const FoldPlan& plan,
                                        unsigned threads = 1);

struct SubsetScore {
  double mae = 0.0;
  double r2 = 0.0;
};

inline constexpr std::size_t kDefaultExhaustiveGuard = 12;

/// Evaluates every non-empty feature subset (2^P - 1 runs) under the
/// identical plan; refuses P > max_p since the cost doubles per feature.
/// Keys are the subset's feature names, sorted.
std::map<std::vector<std::string>, SubsetScore> exhaustive_search(
    const RegressorConfig& config, const DesignMatrix& matrix, const FoldPlan& plan,
    std::size_t max_p = kDefaultExhaustiveGuard, unsigned threads = 1);

/// CSV: feature,mae_delta,r2_delta with a __baseline__ row first carrying the
/// absolute baseline scores.
std::string render_importance_csv(const ImportanceReport& report);
std::string render_subsets_csv(const std::map<std::vector<std::string>, SubsetScore>& scores);

}  // namespace tdebt
