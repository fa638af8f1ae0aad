#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdebt/ingest.hpp"
#include "tdebt/matrix.hpp"

namespace tdebt {

enum class TargetKind { Maintainability, Reliability };

/// How distribution-valued metrics become a single feature column.
enum class DistributionPolicy { WeightedSum, Total, Drop };

const char* target_kind_name(TargetKind kind);
const char* distribution_policy_name(DistributionPolicy policy);
std::optional<TargetKind> parse_target_kind(std::string_view name);
std::optional<DistributionPolicy> parse_distribution_policy(std::string_view name);

/// n x P feature matrix with target vector and per-row project grouping.
/// NaN cells are permitted until impute_median resolves them.
struct DesignMatrix {
  std::vector<std::string> feature_names;
  Matrix rows;
  std::vector<double> target;  // minutes
  TargetKind target_kind = TargetKind::Maintainability;
  std::vector<std::string> groups;  // project_id per row

  std::size_t n() const { return rows.rows(); }
  std::size_t p() const { return rows.cols(); }

  /// Feature-subset view (columns in the given order), same target and groups.
  DesignMatrix with_columns(std::span<const std::size_t> columns) const;
};

/// WeightedSum: sum of numeric-label x value, falling back to the plain total
/// when labels are non-numeric and `total_fallback` allows it. Total: sum of
/// values. Drop: nullopt, the feature is excluded.
std::optional<double> reduce_distribution(const Distribution& dist, DistributionPolicy policy,
                                          bool total_fallback = true);

/// One row per snapshot, feature order fixed to the CSV schema order. Target
/// is sqale_index (Maintainability) or reliability_remediation_effort
/// (Reliability).
DesignMatrix build_matrix(std::span<const MetricSnapshot> snapshots, TargetKind target_kind,
                          DistributionPolicy policy = DistributionPolicy::WeightedSum);

/// Replaces every missing cell with the median of its column computed over
/// `train_rows` only; a column with no non-missing training value fills
/// with 0.
DesignMatrix impute_median(const DesignMatrix& matrix, std::span<const std::size_t> train_rows);

}  // namespace tdebt
