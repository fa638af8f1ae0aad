#include "tdebt/ingest.hpp"

#include <algorithm>
#include <sstream>

#include "tdebt/error.hpp"
#include "tdebt/text.hpp"

namespace tdebt {

namespace schema {

std::string csv_header() {
  std::string h = "project,commit_sha,commit_date";
  for (auto col : kMetricColumns) {
    h += ',';
    h += col;
  }
  for (auto col : kTargetColumns) {
    h += ',';
    h += col;
  }
  return h;
}

}  // namespace schema

double MetricSnapshot::metric(std::string_view key) const {
  auto idx = schema::scalar_index(key);
  if (!idx)
    throw Error(ErrorKind::Schema, "unknown scalar metric key '" + std::string(key) + "'");
  return scalars[*idx];
}

void MetricSnapshot::set_metric(std::string_view key, double value) {
  auto idx = schema::scalar_index(key);
  if (!idx)
    throw Error(ErrorKind::Schema, "unknown scalar metric key '" + std::string(key) + "'");
  scalars[*idx] = value;
}

namespace {

bool is_hex_sha(std::string_view s) {
  if (s.size() != 40) return false;
  for (char c : s) {
    bool hex = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
    if (!hex) return false;
  }
  return true;
}

std::string locate(const std::string& where) { return where.empty() ? "" : where + ": "; }

Distribution parse_distribution_cell(std::string_view cell, std::string_view column,
                                     std::size_t line_no) {
  Distribution dist;
  for (auto pair : split(cell, ';')) {
    std::size_t eq = pair.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw Error(ErrorKind::Row, "line " + std::to_string(line_no) + ": column '" +
                                      std::string(column) + "': bad distribution entry '" +
                                      std::string(pair) + "'");
    std::string label(pair.substr(0, eq));
    auto value = parse_double(pair.substr(eq + 1));
    if (!value)
      throw Error(ErrorKind::Row, "line " + std::to_string(line_no) + ": column '" +
                                      std::string(column) + "': non-numeric value in '" +
                                      std::string(pair) + "'");
    if (!dist.emplace(std::move(label), *value).second)
      throw Error(ErrorKind::Row, "line " + std::to_string(line_no) + ": column '" +
                                      std::string(column) + "': duplicate label '" +
                                      std::string(pair.substr(0, eq)) + "'");
  }
  return dist;
}

double parse_numeric_cell(std::string_view cell, std::string_view column, std::size_t line_no) {
  if (cell.empty()) return kMissing;
  auto v = parse_double(cell);
  if (!v)
    throw Error(ErrorKind::Row, "line " + std::to_string(line_no) + ": column '" +
                                    std::string(column) + "': non-numeric cell '" +
                                    std::string(cell) + "'");
  return *v;
}

std::string render_distribution(const Distribution& dist) {
  std::string out;
  bool first = true;
  for (const auto& [label, value] : dist) {
    if (!first) out += ';';
    first = false;
    out += label;
    out += '=';
    out += format_double(value);
  }
  return out;
}

}  // namespace

void validate_snapshot(const MetricSnapshot& s, const std::string& where) {
  if (s.project_id.empty())
    throw Error(ErrorKind::Validation, locate(where) + "empty project id");
  if (s.project_id.find_first_of(",\r\n") != std::string::npos)
    throw Error(ErrorKind::Validation,
                locate(where) + "project id '" + s.project_id + "' breaks the CSV contract");
  if (!is_hex_sha(s.commit_sha))
    throw Error(ErrorKind::Validation,
                locate(where) + "commit_sha must be 40 hex chars, got '" + s.commit_sha + "'");
  std::size_t scalar_pos = 0;
  for (auto col : schema::kMetricColumns) {
    if (schema::is_distribution_metric(col)) continue;
    double v = s.scalars[scalar_pos++];
    if (is_missing(v)) continue;
    if (schema::is_percent_metric(col)) {
      if (v < 0.0 || v > 100.0)
        throw Error(ErrorKind::Validation, locate(where) + "metric '" + std::string(col) +
                                               "' = " + format_double(v) +
                                               " outside [0, 100]");
    } else if (v < 0.0) {
      throw Error(ErrorKind::Validation, locate(where) + "metric '" + std::string(col) +
                                             "' = " + format_double(v) + " is negative");
    }
  }
  for (std::size_t i = 0; i < schema::kDistributionCount; ++i) {
    if (!s.distributions[i]) continue;
    if (s.distributions[i]->empty())
      throw Error(ErrorKind::Validation,
                  locate(where) + "present distribution '" +
                      std::string(schema::kDistributionMetrics[i]) + "' is empty");
    for (const auto& [label, value] : *s.distributions[i]) {
      if (label.empty() || value < 0.0 ||
          label.find_first_of(",;=\r\n") != std::string::npos)
        throw Error(ErrorKind::Validation,
                    locate(where) + "bad distribution entry in '" +
                        std::string(schema::kDistributionMetrics[i]) + "'");
    }
  }
  const std::pair<std::string_view, double> targets[] = {
      {"sqale_index", s.sqale_index},
      {"reliability_remediation_effort", s.reliability_remediation_effort},
      {"security_remediation_effort", s.security_remediation_effort},
  };
  for (auto [name, v] : targets) {
    if (!is_missing(v) && v < 0.0)
      throw Error(ErrorKind::Validation, locate(where) + "negative target '" +
                                             std::string(name) + "' = " + format_double(v));
  }
}

std::vector<MetricSnapshot> parse_snapshot_csv(std::istream& in) {
  const std::string header_str = schema::csv_header();
  const std::vector<std::string_view> expected = split(header_str, ',');

  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::Schema, "empty input: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  auto got = split(line, ',');
  for (std::size_t i = 0; i < std::min(got.size(), expected.size()); ++i) {
    if (got[i] != expected[i])
      throw Error(ErrorKind::Schema, "header column " + std::to_string(i + 1) +
                                         ": expected '" + std::string(expected[i]) +
                                         "', got '" + std::string(got[i]) + "'");
  }
  if (got.size() < expected.size())
    throw Error(ErrorKind::Schema,
                "header missing column '" + std::string(expected[got.size()]) + "'");
  if (got.size() > expected.size())
    throw Error(ErrorKind::Schema,
                "header has unknown extra column '" + std::string(got[expected.size()]) + "'");

  std::vector<MetricSnapshot> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // tolerate a trailing blank line

    auto cells = split(line, ',');
    if (cells.size() != expected.size())
      throw Error(ErrorKind::Row, "line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(expected.size()) + " cells, got " +
                                      std::to_string(cells.size()));

    MetricSnapshot s;
    s.project_id = std::string(cells[0]);
    s.commit_sha = std::string(cells[1]);
    try {
      s.timestamp = parse_instant(cells[2]);
    } catch (const Error& e) {
      throw Error(ErrorKind::Row, "line " + std::to_string(line_no) + ": " + e.what());
    }

    std::size_t cell_idx = 3;
    std::size_t scalar_pos = 0;
    for (auto col : schema::kMetricColumns) {
      std::string_view cell = cells[cell_idx++];
      if (auto didx = schema::distribution_index(col)) {
        if (!cell.empty()) s.distributions[*didx] = parse_distribution_cell(cell, col, line_no);
      } else {
        s.scalars[scalar_pos++] = parse_numeric_cell(cell, col, line_no);
      }
    }
    s.sqale_index = parse_numeric_cell(cells[cell_idx], "sqale_index", line_no);
    s.reliability_remediation_effort =
        parse_numeric_cell(cells[cell_idx + 1], "reliability_remediation_effort", line_no);
    s.security_remediation_effort =
        parse_numeric_cell(cells[cell_idx + 2], "security_remediation_effort", line_no);

    validate_snapshot(s, "line " + std::to_string(line_no));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<MetricSnapshot> parse_snapshot_csv(const std::string& content) {
  std::istringstream in(content);
  return parse_snapshot_csv(in);
}

std::string render_snapshot_csv(std::span<const MetricSnapshot> snapshots) {
  std::string out = schema::csv_header();
  out += '\n';
  for (const MetricSnapshot& s : snapshots) {
    out += s.project_id;
    out += ',';
    out += s.commit_sha;
    out += ',';
    out += format_instant(s.timestamp);
    std::size_t scalar_pos = 0;
    for (auto col : schema::kMetricColumns) {
      out += ',';
      if (auto didx = schema::distribution_index(col)) {
        if (s.distributions[*didx]) out += render_distribution(*s.distributions[*didx]);
      } else {
        double v = s.scalars[scalar_pos++];
        if (!is_missing(v)) out += format_double(v);
      }
    }
    for (double v : {s.sqale_index, s.reliability_remediation_effort,
                     s.security_remediation_effort}) {
      out += ',';
      if (!is_missing(v)) out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<ProjectDescriptor> filter_projects(std::span<const ProjectDescriptor> descriptors,
                                               Instant now) {
  constexpr std::int64_t kThreeYears = 3 * 365 * kSecondsPerDay;
  std::vector<ProjectDescriptor> out;
  for (const ProjectDescriptor& d : descriptors) {
    bool keep = d.language == "Java" && (now - d.first_commit) > kThreeYears &&
                d.commit_count > 500 && d.class_count > 100 && d.issue_count >= 100;
    if (keep) out.push_back(d);
  }
  return out;
}

std::vector<MetricSnapshot> sample_interval(std::vector<MetricSnapshot> snapshots,
                                            std::int64_t interval_days) {
  if (interval_days < 1)
    throw Error(ErrorKind::Precondition, "sample_interval: interval_days must be >= 1");
  for (const MetricSnapshot& s : snapshots) {
    if (s.project_id != snapshots.front().project_id)
      throw Error(ErrorKind::Precondition,
                  "sample_interval: snapshots span multiple projects ('" +
                      snapshots.front().project_id + "' vs '" + s.project_id + "')");
  }
  std::stable_sort(snapshots.begin(), snapshots.end(),
                   [](const MetricSnapshot& a, const MetricSnapshot& b) {
                     return a.timestamp < b.timestamp;
                   });
  std::vector<MetricSnapshot> out;
  const std::int64_t interval = interval_days * kSecondsPerDay;
  for (MetricSnapshot& s : snapshots) {
    if (out.empty() || s.timestamp - out.back().timestamp >= interval)
      out.push_back(std::move(s));
  }
  return out;
}

}  // namespace tdebt
