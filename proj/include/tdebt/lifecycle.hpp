#pragma once

// Debt-item lifecycles: event timelines, the continuous open-debt series and
// impact-vs-cost ranking.

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tdebt/timeutil.hpp"

namespace tdebt {

enum class EventKind { Introduced, Removed, Reintroduced };

const char* event_kind_name(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

struct Impact {
  std::int64_t bug_count = 0;
  std::int64_t change_count = 0;
  friend bool operator==(const Impact&, const Impact&) = default;
};

struct TDItemEvent {
  std::string item_id;
  EventKind kind = EventKind::Introduced;
  Instant at = 0;
  double remediation_minutes = 0.0;  // meaningful iff kind != Removed
  Impact impact;                     // observed while the episode is open
};

/// One open interval of an item's life: [opened_at, closed_at). The last
/// episode may still be open.
struct Episode {
  Instant opened_at = 0;
  std::optional<Instant> closed_at;
  double remediation_minutes = 0.0;
  Impact impact;
};

struct ItemTimeline {
  std::string item_id;
  std::vector<Episode> episodes;  // chronological, non-overlapping
};

/// Pairs Introduced/Reintroduced with the following Removed per item.
/// Inconsistent sequences (removal while closed, double open, reintroduction
/// before any introduction) raise a validation error naming item and instant.
std::vector<ItemTimeline> build_timelines(std::span<const TDItemEvent> events);

struct DebtSeries {
  std::vector<Instant> at;              // start, start+step, ..., <= end
  std::vector<double> open_debt;        // minutes of open remediation per instant
  std::vector<std::size_t> open_items;  // episodes open per instant
};

/// Samples the open-debt identity over [start, end]: an episode counts at t
/// iff opened_at <= t < closed_at.
DebtSeries debt_series(std::span<const ItemTimeline> timelines, Instant start, Instant end,
                       std::int64_t step_seconds);

struct RankWeights {
  double bug_weight = 1.0;
  double change_weight = 1.0;
};

/// CheapFirst divides impact by cost (the default); ExpensiveFirst inverts
/// the cost ordering by multiplying instead.
enum class CostOrder { CheapFirst, ExpensiveFirst };

struct RankedItem {
  std::string item_id;
  double impact_score = 0.0;
  double cost_minutes = 0.0;  // latest episode's remediation estimate
  double priority = 0.0;
};

/// Sorted by priority descending, ties by item_id ascending. Every item's
/// latest episode must carry a positive remediation estimate.
std::vector<RankedItem> rank_items(std::span<const ItemTimeline> timelines,
                                   const RankWeights& weights,
                                   CostOrder order = CostOrder::CheapFirst);

struct SimulationParams {
  double intro_rate = 0.05;    // per-day introduction probability
  double removal_prob = 0.02;  // per-day removal probability while open
  double reintro_prob = 0.01;  // per-day reintroduction probability once removed
  double cost_min = 5.0;       // minutes
  double cost_max = 240.0;
};

/// Deterministic event generator; every emitted sequence passes
/// build_timelines validation.
std::vector<TDItemEvent> simulate_events(std::size_t n_items, std::int64_t horizon_days,
                                         std::uint64_t seed,
                                         const SimulationParams& params = {});

// Events CSV: item_id,kind,at,remediation_minutes,bug_count,change_count
// (remediation and impact cells empty for Removed).
std::vector<TDItemEvent> parse_events_csv(std::istream& in);
std::vector<TDItemEvent> parse_events_csv(const std::string& content);
std::string render_events_csv(std::span<const TDItemEvent> events);

// Series CSV: at,open_debt_minutes,open_items
std::string render_series_csv(const DebtSeries& series);

/// Static line chart of open debt over time.
std::string render_series_svg(const DebtSeries& series);

std::string render_ranking_csv(std::span<const RankedItem> items);

}  // namespace tdebt
