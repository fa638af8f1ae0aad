#include "tdebt/features.hpp"

#include <algorithm>

#include "tdebt/error.hpp"
#include "tdebt/text.hpp"

namespace tdebt {

const char* target_kind_name(TargetKind kind) {
  return kind == TargetKind::Maintainability ? "maintainability" : "reliability";
}

const char* distribution_policy_name(DistributionPolicy policy) {
  switch (policy) {
    case DistributionPolicy::WeightedSum: return "weighted_sum";
    case DistributionPolicy::Total: return "total";
    case DistributionPolicy::Drop: return "drop";
  }
  return "?";
}

std::optional<TargetKind> parse_target_kind(std::string_view name) {
  if (name == "maintainability") return TargetKind::Maintainability;
  if (name == "reliability") return TargetKind::Reliability;
  return std::nullopt;
}

std::optional<DistributionPolicy> parse_distribution_policy(std::string_view name) {
  if (name == "weighted_sum") return DistributionPolicy::WeightedSum;
  if (name == "total") return DistributionPolicy::Total;
  if (name == "drop") return DistributionPolicy::Drop;
  return std::nullopt;
}

DesignMatrix DesignMatrix::with_columns(std::span<const std::size_t> columns) const {
  DesignMatrix out;
  out.rows = rows.select_columns(columns);
  out.feature_names.reserve(columns.size());
  for (std::size_t c : columns) out.feature_names.push_back(feature_names[c]);
  out.target = target;
  out.target_kind = target_kind;
  out.groups = groups;
  return out;
}

std::optional<double> reduce_distribution(const Distribution& dist, DistributionPolicy policy,
                                          bool total_fallback) {
  switch (policy) {
    case DistributionPolicy::Drop:
      return std::nullopt;
    case DistributionPolicy::Total: {
      double total = 0.0;
      for (const auto& [label, value] : dist) total += value;
      return total;
    }
    case DistributionPolicy::WeightedSum: {
      double weighted = 0.0;
      for (const auto& [label, value] : dist) {
        auto numeric = parse_double(label);
        if (!numeric) {
          if (!total_fallback)
            throw Error(ErrorKind::Policy,
                        "weighted-sum reduction hit non-numeric label '" + label + "'");
          return reduce_distribution(dist, DistributionPolicy::Total, false);
        }
        weighted += *numeric * value;
      }
      return weighted;
    }
  }
  return std::nullopt;
}

DesignMatrix build_matrix(std::span<const MetricSnapshot> snapshots, TargetKind target_kind,
                          DistributionPolicy policy) {
  if (snapshots.empty())
    throw Error(ErrorKind::Precondition, "build_matrix: snapshot list is empty");

  std::vector<std::string> names;
  for (auto col : schema::kMetricColumns) {
    if (schema::is_distribution_metric(col) && policy == DistributionPolicy::Drop) continue;
    names.emplace_back(col);
  }

  DesignMatrix m;
  m.feature_names = std::move(names);
  m.rows = Matrix(snapshots.size(), m.feature_names.size());
  m.target_kind = target_kind;
  m.target.resize(snapshots.size());
  m.groups.reserve(snapshots.size());

  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const MetricSnapshot& s = snapshots[i];
    std::size_t col = 0;
    std::size_t scalar_pos = 0;
    for (auto key : schema::kMetricColumns) {
      if (auto didx = schema::distribution_index(key)) {
        if (policy == DistributionPolicy::Drop) continue;
        if (!s.distributions[*didx]) {
          m.rows(i, col++) = kMissing;
        } else {
          auto reduced = reduce_distribution(*s.distributions[*didx], policy,
                                             key == schema::kLanguageDistribution);
          m.rows(i, col++) = reduced ? *reduced : kMissing;
        }
      } else {
        m.rows(i, col++) = s.scalars[scalar_pos++];
      }
    }
    double target = target_kind == TargetKind::Maintainability
                        ? s.sqale_index
                        : s.reliability_remediation_effort;
    if (is_missing(target))
      throw Error(ErrorKind::Validation,
                  "snapshot " + s.commit_sha + " has no " +
                      std::string(target_kind_name(target_kind)) + " target value");
    m.target[i] = target;
    m.groups.push_back(s.project_id);
  }
  return m;
}

DesignMatrix impute_median(const DesignMatrix& matrix, std::span<const std::size_t> train_rows) {
  if (train_rows.empty())
    throw Error(ErrorKind::Precondition, "impute_median: empty training row set");
  for (std::size_t r : train_rows)
    if (r >= matrix.n())
      throw Error(ErrorKind::Precondition, "impute_median: training row index out of range");

  DesignMatrix out = matrix;
  std::vector<double> column;
  for (std::size_t j = 0; j < matrix.p(); ++j) {
    column.clear();
    for (std::size_t r : train_rows) {
      double v = matrix.rows(r, j);
      if (!is_missing(v)) column.push_back(v);
    }
    double fill = 0.0;  // all-missing training column
    if (!column.empty()) {
      std::sort(column.begin(), column.end());
      std::size_t mid = column.size() / 2;
      fill = column.size() % 2 == 1 ? column[mid] : (column[mid - 1] + column[mid]) / 2.0;
    }
    for (std::size_t i = 0; i < matrix.n(); ++i)
      if (is_missing(out.rows(i, j))) out.rows(i, j) = fill;
  }
  return out;
}

}  // namespace tdebt
