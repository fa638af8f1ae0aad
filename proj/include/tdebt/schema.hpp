#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace tdebt::schema {

/// The 28 metric columns of the snapshot CSV, in canonical order. Three of
/// them are distribution-valued ("label=value;label=value" cells).
inline constexpr std::array<std::string_view, 28> kMetricColumns = {
    "classes",
    "files",
    "lines",
    "ncloc",
    "ncloc_language_distribution",
    "classes_and_interfaces",
    "missing_package_info",
    "packages",
    "statements",
    "directories",
    "functions",
    "comment_lines",
    "comment_lines_density",
    "complexity",
    "class_complexity",
    "function_complexity",
    "function_complexity_distribution",
    "file_complexity_distribution",
    "cognitive_complexity",
    "package_dependency_cycles",
    "coverage",
    "lines_to_cover",
    "line_coverage",
    "uncovered_lines",
    "duplicated_lines",
    "duplicated_blocks",
    "duplicated_files",
    "duplicated_lines_density",
};

inline constexpr std::array<std::string_view, 3> kDistributionMetrics = {
    "ncloc_language_distribution",
    "function_complexity_distribution",
    "file_complexity_distribution",
};

/// Only the language distribution may carry non-numeric labels.
inline constexpr std::string_view kLanguageDistribution = "ncloc_language_distribution";

/// Metrics constrained to [0, 100].
inline constexpr std::array<std::string_view, 4> kPercentMetrics = {
    "comment_lines_density",
    "coverage",
    "line_coverage",
    "duplicated_lines_density",
};

inline constexpr std::array<std::string_view, 3> kTargetColumns = {
    "sqale_index",
    "reliability_remediation_effort",
    "security_remediation_effort",
};

inline constexpr std::size_t kMetricCount = kMetricColumns.size();          // 28
inline constexpr std::size_t kDistributionCount = kDistributionMetrics.size();  // 3
inline constexpr std::size_t kScalarCount = kMetricCount - kDistributionCount;  // 25

constexpr bool is_distribution_metric(std::string_view key) {
  for (auto d : kDistributionMetrics)
    if (d == key) return true;
  return false;
}

constexpr bool is_percent_metric(std::string_view key) {
  for (auto p : kPercentMetrics)
    if (p == key) return true;
  return false;
}

/// Index into the 25-element scalar store, or nullopt for distribution /
/// unknown keys.
constexpr std::optional<std::size_t> scalar_index(std::string_view key) {
  std::size_t idx = 0;
  for (auto col : kMetricColumns) {
    if (is_distribution_metric(col)) continue;
    if (col == key) return idx;
    ++idx;
  }
  return std::nullopt;
}

/// Index into the 3-element distribution store.
constexpr std::optional<std::size_t> distribution_index(std::string_view key) {
  for (std::size_t i = 0; i < kDistributionMetrics.size(); ++i)
    if (kDistributionMetrics[i] == key) return i;
  return std::nullopt;
}

/// Full CSV header: project,commit_sha,commit_date,<28 metrics>,<3 targets>.
std::string csv_header();

}  // namespace tdebt::schema
