#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "support.hpp"
#include "tdebt/error.hpp"
#include "tdebt/lifecycle.hpp"

using namespace tdebt;

namespace {

TDItemEvent event(std::string id, EventKind kind, const char* at, double minutes = 0,
                  std::int64_t bugs = 0, std::int64_t changes = 0) {
  TDItemEvent e;
  e.item_id = std::move(id);
  e.kind = kind;
  e.at = parse_instant(at);
  e.remediation_minutes = minutes;
  e.impact = {bugs, changes};
  return e;
}

// Event-based open-debt oracle: replays raw events up to t instead of using
// episode intervals.
double open_debt_oracle(std::span<const TDItemEvent> events, Instant t) {
  std::map<std::string, std::vector<const TDItemEvent*>> by_item;
  for (const TDItemEvent& e : events) by_item[e.item_id].push_back(&e);
  double debt = 0.0;
  for (auto& [id, list] : by_item) {
    std::sort(list.begin(), list.end(),
              [](const TDItemEvent* a, const TDItemEvent* b) { return a->at < b->at; });
    bool open = false;
    double cost = 0.0;
    for (const TDItemEvent* e : list) {
      if (e->at > t) break;
      if (e->kind == EventKind::Removed) {
        open = false;
      } else {
        open = true;
        cost = e->remediation_minutes;
      }
    }
    if (open) debt += cost;
  }
  return debt;
}

}  // namespace

TEST_CASE("introduced/removed/reintroduced yields two episodes, second open") {
  std::vector<TDItemEvent> events = {
      event("T1", EventKind::Introduced, "2020-01-01", 30, 2, 5),
      event("T1", EventKind::Removed, "2020-03-01"),
      event("T1", EventKind::Reintroduced, "2020-06-01", 45, 1, 2),
  };
  auto timelines = build_timelines(events);
  REQUIRE(timelines.size() == 1);
  REQUIRE(timelines[0].episodes.size() == 2);
  const auto& first = timelines[0].episodes[0];
  const auto& second = timelines[0].episodes[1];
  CHECK(first.closed_at.has_value());
  CHECK(*first.closed_at == parse_instant("2020-03-01"));
  CHECK(first.remediation_minutes == 30);
  CHECK_FALSE(second.closed_at.has_value());
  CHECK(second.remediation_minutes == 45);
}

TEST_CASE("single introduction leaves one open episode") {
  std::vector<TDItemEvent> events = {event("X", EventKind::Introduced, "2021-05-05", 10)};
  auto timelines = build_timelines(events);
  REQUIRE(timelines.size() == 1);
  REQUIRE(timelines[0].episodes.size() == 1);
  CHECK_FALSE(timelines[0].episodes[0].closed_at.has_value());
}

TEST_CASE("inconsistent sequences name the item and instant") {
  std::vector<TDItemEvent> removed_first = {event("bad", EventKind::Removed, "2020-02-02")};
  try {
    build_timelines(removed_first);
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    CHECK(std::string(e.what()).find("bad") != std::string::npos);
    CHECK(std::string(e.what()).find("2020-02-02") != std::string::npos);
  }

  std::vector<TDItemEvent> double_open = {
      event("d", EventKind::Introduced, "2020-01-01", 5),
      event("d", EventKind::Introduced, "2020-02-01", 5),
  };
  CHECK_THROWS_AS((void)build_timelines(double_open), Error);

  std::vector<TDItemEvent> reintro_first = {
      event("r", EventKind::Reintroduced, "2020-01-01", 5)};
  CHECK_THROWS_AS((void)build_timelines(reintro_first), Error);

  std::vector<TDItemEvent> same_instant = {
      event("s", EventKind::Introduced, "2020-01-01", 5),
      event("s", EventKind::Removed, "2020-01-01"),
  };
  CHECK_THROWS_AS((void)build_timelines(same_instant), Error);
}

TEST_CASE("debt series: constant, empty and stepped scenarios") {
  const Instant start = parse_instant("2020-01-01");
  const Instant end = parse_instant("2020-01-30");

  SUBCASE("one episode spanning every sample") {
    std::vector<TDItemEvent> events = {event("a", EventKind::Introduced, "2019-12-01", 10)};
    auto series = debt_series(build_timelines(events), start, end, kSecondsPerDay);
    REQUIRE(series.at.size() == 30);
    for (double v : series.open_debt) CHECK(v == 10.0);
    for (std::size_t c : series.open_items) CHECK(c == 1);
  }

  SUBCASE("no timelines gives the zero series") {
    auto series = debt_series({}, start, end, kSecondsPerDay);
    for (double v : series.open_debt) CHECK(v == 0.0);
    for (std::size_t c : series.open_items) CHECK(c == 0);
  }

  SUBCASE("two episodes overlapping in the middle third step 10 -> 15 -> 5") {
    std::vector<TDItemEvent> events = {
        event("a", EventKind::Introduced, "2020-01-01", 10),
        event("a", EventKind::Removed, "2020-01-21"),
        event("b", EventKind::Introduced, "2020-01-11", 5),
        event("b", EventKind::Removed, "2020-01-31"),
    };
    auto series = debt_series(build_timelines(events), start, end, kSecondsPerDay);
    REQUIRE(series.at.size() == 30);
    for (std::size_t i = 0; i < 10; ++i) CHECK(series.open_debt[i] == 10.0);
    for (std::size_t i = 10; i < 20; ++i) CHECK(series.open_debt[i] == 15.0);
    for (std::size_t i = 20; i < 30; ++i) CHECK(series.open_debt[i] == 5.0);
  }
}

TEST_CASE("debt series endpoints: removal instant carries no debt") {
  std::vector<TDItemEvent> events = {
      event("a", EventKind::Introduced, "2020-01-05", 7),
      event("a", EventKind::Removed, "2020-01-10"),
  };
  auto timelines = build_timelines(events);
  auto series = debt_series(timelines, parse_instant("2020-01-05"),
                            parse_instant("2020-01-10"), kSecondsPerDay);
  CHECK(series.open_debt.front() == 7.0);  // open at the introduction instant
  CHECK(series.open_debt.back() == 0.0);   // closed at the removal instant
}

TEST_CASE("rank_items follows the impact-over-cost rule") {
  std::vector<TDItemEvent> events = {
      event("A", EventKind::Introduced, "2020-01-01", 5, 10, 0),
      event("B", EventKind::Introduced, "2020-01-02", 10, 10, 0),
  };
  auto timelines = build_timelines(events);
  auto ranked = rank_items(timelines, {1.0, 1.0});
  REQUIRE(ranked.size() == 2);
  CHECK(ranked[0].item_id == "A");  // same impact, cheaper fix first
  CHECK(ranked[0].priority == 2.0);
  CHECK(ranked[1].priority == 1.0);

  auto inverted = rank_items(timelines, {1.0, 1.0}, CostOrder::ExpensiveFirst);
  CHECK(inverted[0].item_id == "B");
}

TEST_CASE("rank_items: zero weights rank by item id") {
  std::vector<TDItemEvent> events = {
      event("zeta", EventKind::Introduced, "2020-01-01", 5, 4, 4),
      event("alpha", EventKind::Introduced, "2020-01-02", 9, 9, 9),
  };
  auto ranked = rank_items(build_timelines(events), {0.0, 0.0});
  CHECK(ranked[0].item_id == "alpha");
  CHECK(ranked[0].priority == 0.0);
  CHECK(ranked[1].item_id == "zeta");
}

TEST_CASE("rank_items hand example: (2,1) weights, cost 7") {
  std::vector<TDItemEvent> events = {
      event("h", EventKind::Introduced, "2020-01-01", 7, 3, 1),
  };
  auto ranked = rank_items(build_timelines(events), {2.0, 1.0});
  REQUIRE(ranked.size() == 1);
  CHECK(ranked[0].impact_score == 7.0);
  CHECK(ranked[0].priority == 1.0);
}

TEST_CASE("rank_items rejects zero remediation cost") {
  std::vector<TDItemEvent> events = {event("z", EventKind::Introduced, "2020-01-01", 0)};
  CHECK_THROWS_AS((void)rank_items(build_timelines(events), {1.0, 1.0}), Error);
}

TEST_CASE("property: rescaling both weights preserves the order") {
  auto events = simulate_events(30, 400, 77);
  auto timelines = build_timelines(events);
  auto base = rank_items(timelines, {2.0, 0.5});
  auto scaled = rank_items(timelines, {2.0 * 3.5, 0.5 * 3.5});
  REQUIRE(base.size() == scaled.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(base[i].item_id == scaled[i].item_id);
    CHECK(scaled[i].priority == doctest::Approx(3.5 * base[i].priority).epsilon(1e-12));
  }
}

TEST_CASE("simulate_events is deterministic and respects switched-off transitions") {
  auto a = simulate_events(20, 300, 5);
  auto b = simulate_events(20, 300, 5);
  REQUIRE(a.size() == b.size());
  CHECK(render_events_csv(a) == render_events_csv(b));
  CHECK(!a.empty());

  SimulationParams no_removal;
  no_removal.removal_prob = 0.0;
  for (const auto& e : simulate_events(20, 300, 5, no_removal))
    CHECK(e.kind != EventKind::Removed);

  SimulationParams no_reintro;
  no_reintro.reintro_prob = 0.0;
  for (const auto& e : simulate_events(20, 300, 5, no_reintro))
    CHECK(e.kind != EventKind::Reintroduced);
}

TEST_CASE("property: simulated histories satisfy the conservation identity") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto events = simulate_events(15, 250, seed);
    auto timelines = build_timelines(events);  // must validate cleanly
    const Instant start = parse_instant("2020-01-01");
    const Instant end = start + 250 * kSecondsPerDay;
    auto series = debt_series(timelines, start, end, 5 * kSecondsPerDay);
    for (std::size_t i = 0; i < series.at.size(); ++i) {
      CHECK(series.open_debt[i] == open_debt_oracle(events, series.at[i]));
    }
  }
}

TEST_CASE("property: appending a removal never raises later debt") {
  auto events = simulate_events(12, 200, 31);
  auto timelines = build_timelines(events);
  const Instant start = parse_instant("2020-01-01");
  const Instant end = start + 200 * kSecondsPerDay;
  auto before = debt_series(timelines, start, end, kSecondsPerDay);

  // Find an item whose last episode is still open and close it mid-range.
  for (const auto& timeline : timelines) {
    if (timeline.episodes.back().closed_at) continue;
    TDItemEvent removal;
    removal.item_id = timeline.item_id;
    removal.kind = EventKind::Removed;
    removal.at = timeline.episodes.back().opened_at + 17 * kSecondsPerDay;
    auto extended = std::vector<TDItemEvent>(events.begin(), events.end());
    extended.push_back(removal);
    auto after = debt_series(build_timelines(extended), start, end, kSecondsPerDay);
    for (std::size_t i = 0; i < before.at.size(); ++i) {
      if (before.at[i] >= removal.at) {
        CHECK(after.open_debt[i] <= before.open_debt[i]);
      } else {
        CHECK(after.open_debt[i] == before.open_debt[i]);
      }
    }
    return;
  }
  FAIL("fixture had no open item to close");
}

TEST_CASE("events CSV round-trips and rejects malformed rows") {
  auto events = simulate_events(8, 150, 99);
  std::string csv = render_events_csv(events);
  auto reparsed = parse_events_csv(csv);
  CHECK(render_events_csv(reparsed) == csv);

  CHECK_THROWS_AS((void)parse_events_csv(std::string("nope\n")), Error);
  CHECK_THROWS_AS(
      (void)parse_events_csv(
          std::string("item_id,kind,at,remediation_minutes,bug_count,change_count\n"
                      "a,exploded,2020-01-01T00:00:00Z,5,0,0\n")),
      Error);
  // Removed rows must keep remediation and impact cells empty.
  CHECK_THROWS_AS(
      (void)parse_events_csv(
          std::string("item_id,kind,at,remediation_minutes,bug_count,change_count\n"
                      "a,removed,2020-01-01T00:00:00Z,5,,\n")),
      Error);
}

TEST_CASE("series and ranking renderers emit the documented layouts") {
  std::vector<TDItemEvent> events = {event("a", EventKind::Introduced, "2020-01-01", 10)};
  auto timelines = build_timelines(events);
  auto series = debt_series(timelines, parse_instant("2020-01-01"),
                            parse_instant("2020-01-05"), kSecondsPerDay);
  std::string csv = render_series_csv(series);
  CHECK(csv.rfind("at,open_debt_minutes,open_items\n", 0) == 0);
  CHECK(csv.find("2020-01-01T00:00:00Z,10,1") != std::string::npos);

  std::string svg = render_series_svg(series);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);

  auto ranked = rank_items(timelines, {1.0, 1.0});
  CHECK(render_ranking_csv(ranked).rfind("item_id,impact_score,cost_minutes,priority\n", 0) ==
        0);
}
