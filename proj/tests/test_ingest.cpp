#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tdebt/error.hpp"
#include "tdebt/ingest.hpp"
#include "tdebt/timeutil.hpp"

using namespace tdebt;

namespace {

bool value_eq(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return a == b;
}

bool snapshots_eq(const MetricSnapshot& a, const MetricSnapshot& b) {
  if (a.project_id != b.project_id || a.commit_sha != b.commit_sha ||
      a.timestamp != b.timestamp)
    return false;
  for (std::size_t i = 0; i < a.scalars.size(); ++i)
    if (!value_eq(a.scalars[i], b.scalars[i])) return false;
  if (a.distributions != b.distributions) return false;
  return value_eq(a.sqale_index, b.sqale_index) &&
         value_eq(a.reliability_remediation_effort, b.reliability_remediation_effort) &&
         value_eq(a.security_remediation_effort, b.security_remediation_effort);
}

MetricSnapshot valid_snapshot() {
  MetricSnapshot s;
  s.project_id = "alpha";
  s.commit_sha = "a1b2c3d4e5f60718293a4b5c6d7e8f9012345678";
  s.timestamp = parse_instant("2020-01-01T00:00:00Z");
  std::size_t pos = 0;
  for (auto col : schema::kMetricColumns) {
    if (schema::is_distribution_metric(col)) continue;
    s.scalars[pos] = schema::is_percent_metric(col) ? 50.0 : static_cast<double>(pos * 3);
    ++pos;
  }
  s.sqale_index = 1234;
  s.reliability_remediation_effort = 56;
  s.security_remediation_effort = 7;
  return s;
}

std::string csv_of(const MetricSnapshot& s) {
  return render_snapshot_csv(std::span(&s, 1));
}

}  // namespace

TEST_CASE("timestamps round-trip and reject junk") {
  for (const char* text : {"2020-01-01T00:00:00Z", "1999-12-31T23:59:59Z",
                           "2024-02-29T06:30:15Z"}) {
    CHECK(format_instant(parse_instant(text)) == text);
  }
  CHECK(parse_instant("2020-07-01") == parse_instant("2020-07-01T00:00:00Z"));
  for (const char* bad : {"2020-13-01T00:00:00Z", "2020-01-01 00:00:00", "garbage",
                          "2020-01-01T00:00:00+02:00", ""}) {
    CHECK_THROWS_AS(parse_instant(bad), Error);
  }
}

TEST_CASE("parse: single valid row maps fields directly") {
  MetricSnapshot s = valid_snapshot();
  auto parsed = parse_snapshot_csv(csv_of(s));
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].sqale_index == 1234);
  CHECK(parsed[0].project_id == "alpha");
  CHECK(snapshots_eq(parsed[0], s));
}

TEST_CASE("parse: header-only file gives empty list") {
  CHECK(parse_snapshot_csv(schema::csv_header() + "\n").empty());
}

TEST_CASE("parse: coverage above 100 is a validation error") {
  MetricSnapshot s = valid_snapshot();
  s.set_metric("coverage", 101.0);
  std::string csv = render_snapshot_csv(std::span(&s, 1));
  try {
    parse_snapshot_csv(csv);
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("coverage") != std::string::npos);
  }
}

TEST_CASE("parse: malformed header names the offending column") {
  std::string header = schema::csv_header();
  auto pos = header.find("ncloc");
  header.replace(pos, 5, "nclox");
  try {
    parse_snapshot_csv(header + "\n");
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK(std::string(e.what()).find("ncloc") != std::string::npos);
  }
}

TEST_CASE("parse: non-numeric cell reports the line number") {
  MetricSnapshot s = valid_snapshot();
  std::string csv = csv_of(s);
  auto pos = csv.find(",1234,");  // sqale cell of the only data row (line 2)
  csv.replace(pos, 6, ",12x4,");
  try {
    parse_snapshot_csv(csv);
    FAIL("expected row error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Row);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("parse: negative target is a validation error") {
  MetricSnapshot s = valid_snapshot();
  s.sqale_index = -5;
  CHECK_THROWS_AS((void)parse_snapshot_csv(csv_of(s)), Error);
}

TEST_CASE("parse: bad commit sha rejected") {
  MetricSnapshot s = valid_snapshot();
  s.commit_sha = "zz";
  CHECK_THROWS_AS((void)parse_snapshot_csv(csv_of(s)), Error);
}

TEST_CASE("fixture file parses with missing cells intact") {
  std::string content = test::read_file(test::fixture_path("snapshots_small.csv"));
  auto snaps = parse_snapshot_csv(content);
  REQUIRE(snaps.size() == 6);
  CHECK(snaps[0].metric("classes") == 120);
  CHECK(snaps[0].sqale_index == 5400);
  auto lang = snaps[0].distributions[*schema::distribution_index(
      "ncloc_language_distribution")];
  REQUIRE(lang.has_value());
  CHECK(lang->at("java") == 8800);
  CHECK(lang->at("xml") == 200);
  CHECK(is_missing(snaps[2].metric("coverage")));
  CHECK_FALSE(snaps[3]
                  .distributions[*schema::distribution_index("ncloc_language_distribution")]
                  .has_value());
}

TEST_CASE("property: parse(render(x)) round-trips bit-exactly") {
  auto snaps = test::synthetic_snapshots(3, 5, 99);
  // Punch a few holes so missing cells are also exercised.
  snaps[1].set_metric("coverage", kMissing);
  snaps[2].distributions[0].reset();
  snaps[4].security_remediation_effort = kMissing;
  // Awkward doubles must survive exactly.
  snaps[0].set_metric("class_complexity", 0.1 + 0.2);
  snaps[3].set_metric("duplicated_lines_density", 1.0 / 3.0);

  std::string rendered = render_snapshot_csv(snaps);
  auto reparsed = parse_snapshot_csv(rendered);
  REQUIRE(reparsed.size() == snaps.size());
  for (std::size_t i = 0; i < snaps.size(); ++i) CHECK(snapshots_eq(snaps[i], reparsed[i]));
  CHECK(render_snapshot_csv(reparsed) == rendered);
}

TEST_CASE("filter_projects applies the five criteria") {
  const Instant now = parse_instant("2020-01-01T00:00:00Z");
  ProjectDescriptor base;
  base.name = "proj";
  base.language = "Java";
  base.first_commit = parse_instant("2015-01-01T00:00:00Z");
  base.last_commit = now;
  base.commit_count = 1000;
  base.class_count = 200;
  base.issue_count = 150;

  SUBCASE("all criteria satisfied") {
    CHECK(filter_projects(std::span(&base, 1), now).size() == 1);
  }
  SUBCASE("exactly 500 commits is excluded") {
    base.commit_count = 500;
    CHECK(filter_projects(std::span(&base, 1), now).empty());
  }
  SUBCASE("exactly 100 issues is included") {
    base.issue_count = 100;
    CHECK(filter_projects(std::span(&base, 1), now).size() == 1);
  }
  SUBCASE("age boundary: exactly three years is excluded") {
    base.first_commit = now - 3 * 365 * kSecondsPerDay;
    CHECK(filter_projects(std::span(&base, 1), now).empty());
  }
  SUBCASE("non-Java excluded") {
    base.language = "Kotlin";
    CHECK(filter_projects(std::span(&base, 1), now).empty());
  }
}

TEST_CASE("property: filter_projects is idempotent") {
  const Instant now = parse_instant("2021-06-01T00:00:00Z");
  Rng rng(7);
  std::vector<ProjectDescriptor> projects;
  for (int i = 0; i < 60; ++i) {
    ProjectDescriptor d;
    d.name = "p" + std::to_string(i);
    d.language = rng.next_real() < 0.7 ? "Java" : "Scala";
    d.first_commit = now - static_cast<Instant>(rng.next_index(8 * 365)) * kSecondsPerDay;
    d.last_commit = now;
    d.commit_count = static_cast<std::int64_t>(rng.next_index(2000));
    d.class_count = static_cast<std::int64_t>(rng.next_index(400));
    d.issue_count = static_cast<std::int64_t>(rng.next_index(300));
    projects.push_back(d);
  }
  auto once = filter_projects(projects, now);
  auto twice = filter_projects(once, now);
  REQUIRE(once.size() == twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) CHECK(once[i].name == twice[i].name);
}

namespace {

MetricSnapshot at_day(int day) {
  MetricSnapshot s = valid_snapshot();
  s.timestamp = parse_instant("2020-01-01T00:00:00Z") + day * kSecondsPerDay;
  s.commit_sha[0] = static_cast<char>('0' + day % 10);
  return s;
}

}  // namespace

TEST_CASE("sample_interval follows the greedy 180-day rule") {
  std::vector<MetricSnapshot> snaps = {at_day(0), at_day(90), at_day(200), at_day(400)};
  auto kept = sample_interval(snaps, 180);
  REQUIRE(kept.size() == 3);
  CHECK(kept[0].timestamp == at_day(0).timestamp);
  CHECK(kept[1].timestamp == at_day(200).timestamp);
  CHECK(kept[2].timestamp == at_day(400).timestamp);
}

TEST_CASE("sample_interval: single snapshot is kept") {
  std::vector<MetricSnapshot> snaps = {at_day(5)};
  CHECK(sample_interval(snaps, 180).size() == 1);
}

TEST_CASE("sample_interval: exact boundary is inclusive") {
  std::vector<MetricSnapshot> snaps = {at_day(0), at_day(180)};
  CHECK(sample_interval(snaps, 180).size() == 2);
}

TEST_CASE("sample_interval rejects mixed projects") {
  std::vector<MetricSnapshot> snaps = {at_day(0), at_day(90)};
  snaps[1].project_id = "other";
  CHECK_THROWS_AS((void)sample_interval(snaps, 180), Error);
}

TEST_CASE("property: sampled gaps respect the interval and start at the earliest") {
  Rng rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MetricSnapshot> snaps;
    int n = 1 + static_cast<int>(rng.next_index(30));
    for (int i = 0; i < n; ++i)
      snaps.push_back(at_day(static_cast<int>(rng.next_index(1000))));
    std::int64_t interval = 1 + static_cast<std::int64_t>(rng.next_index(400));

    Instant earliest = snaps[0].timestamp;
    for (const auto& s : snaps) earliest = std::min(earliest, s.timestamp);

    auto kept = sample_interval(snaps, interval);
    REQUIRE(!kept.empty());
    CHECK(kept.front().timestamp == earliest);
    for (std::size_t i = 1; i < kept.size(); ++i) {
      CHECK(kept[i].timestamp - kept[i - 1].timestamp >= interval * kSecondsPerDay);
    }
  }
}
