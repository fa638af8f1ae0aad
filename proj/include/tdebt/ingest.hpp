#pragma once

// Snapshot ingestion: CSV parse/render, project selection criteria, interval
// down-sampling, and the metrics-server fetch client.

#include <array>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdebt/schema.hpp"
#include "tdebt/timeutil.hpp"

namespace tdebt {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return v != v; }

/// Distribution-valued metric cell. Present distributions are non-empty;
/// an empty CSV cell means the whole distribution is missing.
using Distribution = std::map<std::string, double>;

/// One project-commit measurement: 25 scalar metrics, 3 distribution metrics
/// and the three remediation-effort targets (minutes). NaN marks a missing
/// scalar or target.
struct MetricSnapshot {
  std::string project_id;
  std::string commit_sha;  // 40 hex chars
  Instant timestamp = 0;
  std::array<double, schema::kScalarCount> scalars;
  std::array<std::optional<Distribution>, schema::kDistributionCount> distributions;
  double sqale_index = kMissing;
  double reliability_remediation_effort = kMissing;
  double security_remediation_effort = kMissing;

  MetricSnapshot() { scalars.fill(kMissing); }

  /// Scalar metric by schema key; throws Error{Schema} on unknown or
  /// distribution keys.
  double metric(std::string_view key) const;
  void set_metric(std::string_view key, double value);
};

/// Checks the type invariants: sha shape, percent ranges, non-negative counts
/// and targets. `where` prefixes the error message (e.g. "line 3").
void validate_snapshot(const MetricSnapshot& s, const std::string& where = {});

std::vector<MetricSnapshot> parse_snapshot_csv(std::istream& in);
std::vector<MetricSnapshot> parse_snapshot_csv(const std::string& content);
std::string render_snapshot_csv(std::span<const MetricSnapshot> snapshots);

struct ProjectDescriptor {
  std::string name;
  std::string language;
  Instant first_commit = 0;
  Instant last_commit = 0;
  std::int64_t commit_count = 0;
  std::int64_t class_count = 0;
  std::int64_t issue_count = 0;
};

/// Keeps descriptors satisfying all five selection criteria: Java, older than
/// three years (3*365 days before `now`), more than 500 commits, more than
/// 100 classes, at least 100 issues.
std::vector<ProjectDescriptor> filter_projects(std::span<const ProjectDescriptor> descriptors,
                                               Instant now);

/// Greedy down-sampling: keep the earliest snapshot, then the earliest one at
/// least `interval_days` after the last kept (boundary inclusive). All
/// snapshots must belong to one project.
std::vector<MetricSnapshot> sample_interval(std::vector<MetricSnapshot> snapshots,
                                            std::int64_t interval_days);

struct FetchOptions {
  /// Placeholders {project}, {metrics}, {page} are substituted.
  std::string url_template = "/api/snapshots?project={project}&metrics={metrics}&p={page}";
  int max_attempts = 3;
  int timeout_seconds = 10;
};

/// Pulls every analysis of `project_key` from a metrics server, following the
/// page parameter until a page comes back empty. Measures absent from a
/// response map to the missing sentinel.
std::vector<MetricSnapshot> fetch_snapshots(const std::string& server_url,
                                            const std::string& project_key,
                                            std::span<const std::string> metric_keys,
                                            const std::optional<std::string>& auth_token = {},
                                            const FetchOptions& options = {});

}  // namespace tdebt
