#include "tdebt/lifecycle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "tdebt/error.hpp"
#include "tdebt/rng.hpp"
#include "tdebt/text.hpp"

namespace tdebt {

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::Introduced: return "introduced";
    case EventKind::Removed: return "removed";
    case EventKind::Reintroduced: return "reintroduced";
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  if (name == "introduced") return EventKind::Introduced;
  if (name == "removed") return EventKind::Removed;
  if (name == "reintroduced") return EventKind::Reintroduced;
  return std::nullopt;
}

namespace {

[[noreturn]] void sequence_error(const std::string& item_id, Instant at,
                                 const std::string& why) {
  throw Error(ErrorKind::Validation,
              "item '" + item_id + "' at " + format_instant(at) + ": " + why);
}

}  // namespace

std::vector<ItemTimeline> build_timelines(std::span<const TDItemEvent> events) {
  std::map<std::string, std::vector<TDItemEvent>> by_item;
  for (const TDItemEvent& e : events) by_item[e.item_id].push_back(e);

  std::vector<ItemTimeline> out;
  for (auto& [item_id, item_events] : by_item) {
    std::stable_sort(item_events.begin(), item_events.end(),
                     [](const TDItemEvent& a, const TDItemEvent& b) { return a.at < b.at; });
    for (std::size_t i = 1; i < item_events.size(); ++i) {
      if (item_events[i].at == item_events[i - 1].at)
        sequence_error(item_id, item_events[i].at, "two events share one instant");
    }

    ItemTimeline timeline;
    timeline.item_id = item_id;
    bool open = false;
    bool ever_opened = false;
    for (const TDItemEvent& e : item_events) {
      switch (e.kind) {
        case EventKind::Introduced:
          if (open) sequence_error(item_id, e.at, "introduced while already open");
          if (ever_opened)
            sequence_error(item_id, e.at, "re-opening must use a reintroduced event");
          break;
        case EventKind::Reintroduced:
          if (open) sequence_error(item_id, e.at, "reintroduced while already open");
          if (!ever_opened)
            sequence_error(item_id, e.at, "reintroduced before any introduction");
          break;
        case EventKind::Removed:
          if (!open) sequence_error(item_id, e.at, "removed with no open episode");
          break;
      }
      if (e.kind == EventKind::Removed) {
        timeline.episodes.back().closed_at = e.at;
        open = false;
      } else {
        if (e.remediation_minutes < 0 || !std::isfinite(e.remediation_minutes))
          sequence_error(item_id, e.at, "remediation minutes must be finite and >= 0");
        if (e.impact.bug_count < 0 || e.impact.change_count < 0)
          sequence_error(item_id, e.at, "impact counts must be >= 0");
        Episode episode;
        episode.opened_at = e.at;
        episode.remediation_minutes = e.remediation_minutes;
        episode.impact = e.impact;
        timeline.episodes.push_back(episode);
        open = true;
        ever_opened = true;
      }
    }
    out.push_back(std::move(timeline));
  }
  return out;
}

DebtSeries debt_series(std::span<const ItemTimeline> timelines, Instant start, Instant end,
                       std::int64_t step_seconds) {
  if (start >= end) throw Error(ErrorKind::Precondition, "debt_series: start must be < end");
  if (step_seconds <= 0) throw Error(ErrorKind::Precondition, "debt_series: step must be > 0");

  DebtSeries series;
  for (Instant t = start; t <= end; t += step_seconds) {
    double debt = 0.0;
    std::size_t count = 0;
    for (const ItemTimeline& timeline : timelines) {
      for (const Episode& e : timeline.episodes) {
        const bool is_open = e.opened_at <= t && (!e.closed_at || t < *e.closed_at);
        if (is_open) {
          debt += e.remediation_minutes;
          ++count;
        }
      }
    }
    series.at.push_back(t);
    series.open_debt.push_back(debt);
    series.open_items.push_back(count);
  }
  return series;
}

std::vector<RankedItem> rank_items(std::span<const ItemTimeline> timelines,
                                   const RankWeights& weights, CostOrder order) {
  if (weights.bug_weight < 0 || weights.change_weight < 0)
    throw Error(ErrorKind::Precondition, "rank_items: weights must be >= 0");

  std::vector<RankedItem> out;
  for (const ItemTimeline& timeline : timelines) {
    if (timeline.episodes.empty())
      throw Error(ErrorKind::Validation,
                  "item '" + timeline.item_id + "' has no episodes");
    RankedItem item;
    item.item_id = timeline.item_id;
    item.cost_minutes = timeline.episodes.back().remediation_minutes;
    if (item.cost_minutes <= 0)
      throw Error(ErrorKind::Validation,
                  "item '" + timeline.item_id + "' has non-positive remediation cost");
    std::int64_t bugs = 0, changes = 0;
    for (const Episode& e : timeline.episodes) {
      bugs += e.impact.bug_count;
      changes += e.impact.change_count;
    }
    item.impact_score = weights.bug_weight * static_cast<double>(bugs) +
                        weights.change_weight * static_cast<double>(changes);
    item.priority = order == CostOrder::CheapFirst ? item.impact_score / item.cost_minutes
                                                   : item.impact_score * item.cost_minutes;
    out.push_back(std::move(item));
  }
  std::sort(out.begin(), out.end(), [](const RankedItem& a, const RankedItem& b) {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.item_id < b.item_id;
  });
  return out;
}

std::vector<TDItemEvent> simulate_events(std::size_t n_items, std::int64_t horizon_days,
                                         std::uint64_t seed, const SimulationParams& params) {
  if (n_items < 1) throw Error(ErrorKind::Precondition, "simulate_events: n_items must be >= 1");
  if (horizon_days < 1)
    throw Error(ErrorKind::Precondition, "simulate_events: horizon_days must be >= 1");
  for (double prob : {params.intro_rate, params.removal_prob, params.reintro_prob}) {
    if (!(prob >= 0.0 && prob <= 1.0))
      throw Error(ErrorKind::Precondition, "simulate_events: probabilities must be in [0, 1]");
  }
  if (!(params.cost_min > 0.0) || params.cost_max < params.cost_min)
    throw Error(ErrorKind::Precondition, "simulate_events: need 0 < cost_min <= cost_max");

  const Instant base = parse_instant("2020-01-01");
  enum class State { NeverOpen, Open, Closed };

  std::vector<TDItemEvent> events;
  for (std::size_t item = 0; item < n_items; ++item) {
    // Per-item stream: an item's history does not depend on how many other
    // items exist.
    Rng rng(mix_seed(seed, item));
    char id[24];
    std::snprintf(id, sizeof(id), "TD-%05zu", item);
    State state = State::NeverOpen;
    for (std::int64_t day = 0; day < horizon_days; ++day) {
      const double u = rng.next_real();
      const Instant at = base + day * kSecondsPerDay;
      switch (state) {
        case State::NeverOpen:
        case State::Closed: {
          const double prob =
              state == State::NeverOpen ? params.intro_rate : params.reintro_prob;
          if (u < prob) {
            TDItemEvent e;
            e.item_id = id;
            e.kind = state == State::NeverOpen ? EventKind::Introduced
                                               : EventKind::Reintroduced;
            e.at = at;
            e.remediation_minutes =
                params.cost_min + rng.next_real() * (params.cost_max - params.cost_min);
            e.impact.bug_count = static_cast<std::int64_t>(rng.next_index(6));
            e.impact.change_count = static_cast<std::int64_t>(rng.next_index(11));
            events.push_back(std::move(e));
            state = State::Open;
          }
          break;
        }
        case State::Open: {
          if (u < params.removal_prob) {
            TDItemEvent e;
            e.item_id = id;
            e.kind = EventKind::Removed;
            e.at = at;
            events.push_back(std::move(e));
            state = State::Closed;
          }
          break;
        }
      }
    }
  }
  std::sort(events.begin(), events.end(), [](const TDItemEvent& a, const TDItemEvent& b) {
    if (a.at != b.at) return a.at < b.at;
    return a.item_id < b.item_id;
  });
  return events;
}

namespace {

constexpr std::string_view kEventsHeader =
    "item_id,kind,at,remediation_minutes,bug_count,change_count";

}  // namespace

std::vector<TDItemEvent> parse_events_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorKind::Schema, "empty input: missing events header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kEventsHeader)
    throw Error(ErrorKind::Schema,
                "events header must be '" + std::string(kEventsHeader) + "'");

  std::vector<TDItemEvent> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != 6)
      throw Error(ErrorKind::Row,
                  "line " + std::to_string(line_no) + ": expected 6 cells, got " +
                      std::to_string(cells.size()));
    TDItemEvent e;
    e.item_id = std::string(cells[0]);
    if (e.item_id.empty())
      throw Error(ErrorKind::Row, "line " + std::to_string(line_no) + ": empty item_id");
    auto kind = parse_event_kind(cells[1]);
    if (!kind)
      throw Error(ErrorKind::Row, "line " + std::to_string(line_no) + ": unknown kind '" +
                                      std::string(cells[1]) + "'");
    e.kind = *kind;
    try {
      e.at = parse_instant(cells[2]);
    } catch (const Error& err) {
      throw Error(ErrorKind::Row, "line " + std::to_string(line_no) + ": " + err.what());
    }
    if (e.kind == EventKind::Removed) {
      if (!cells[3].empty() || !cells[4].empty() || !cells[5].empty())
        throw Error(ErrorKind::Validation,
                    "line " + std::to_string(line_no) +
                        ": removed events carry no remediation or impact cells");
    } else {
      auto minutes = parse_double(cells[3]);
      auto bugs = parse_int(cells[4]);
      auto changes = parse_int(cells[5]);
      if (!minutes || !bugs || !changes)
        throw Error(ErrorKind::Row,
                    "line " + std::to_string(line_no) + ": non-numeric cell");
      if (*minutes < 0 || *bugs < 0 || *changes < 0)
        throw Error(ErrorKind::Validation,
                    "line " + std::to_string(line_no) + ": negative value");
      e.remediation_minutes = *minutes;
      e.impact.bug_count = *bugs;
      e.impact.change_count = *changes;
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<TDItemEvent> parse_events_csv(const std::string& content) {
  std::istringstream in(content);
  return parse_events_csv(in);
}

std::string render_events_csv(std::span<const TDItemEvent> events) {
  std::string out = std::string(kEventsHeader) + "\n";
  for (const TDItemEvent& e : events) {
    out += e.item_id;
    out += ',';
    out += event_kind_name(e.kind);
    out += ',';
    out += format_instant(e.at);
    if (e.kind == EventKind::Removed) {
      out += ",,,";
    } else {
      out += ',' + format_double(e.remediation_minutes);
      out += ',' + std::to_string(e.impact.bug_count);
      out += ',' + std::to_string(e.impact.change_count);
    }
    out += '\n';
  }
  return out;
}

std::string render_series_csv(const DebtSeries& series) {
  std::string out = "at,open_debt_minutes,open_items\n";
  for (std::size_t i = 0; i < series.at.size(); ++i) {
    out += format_instant(series.at[i]);
    out += ',' + format_double(series.open_debt[i]);
    out += ',' + std::to_string(series.open_items[i]);
    out += '\n';
  }
  return out;
}

std::string render_series_svg(const DebtSeries& series) {
  constexpr double width = 800, height = 400;
  constexpr double left = 70, right = 20, top = 20, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double debt_max = 0.0;
  for (double v : series.open_debt) debt_max = std::max(debt_max, v);
  if (debt_max <= 0.0) debt_max = 1.0;
  const std::size_t n = series.at.size();

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"400\" "
         "viewBox=\"0 0 800 400\">\n";
  svg += "  <rect width=\"800\" height=\"400\" fill=\"white\"/>\n";
  svg += "  <line x1=\"70\" y1=\"330\" x2=\"780\" y2=\"330\" stroke=\"black\"/>\n";
  svg += "  <line x1=\"70\" y1=\"20\" x2=\"70\" y2=\"330\" stroke=\"black\"/>\n";

  if (n > 0) {
    std::string points;
    for (std::size_t i = 0; i < n; ++i) {
      const double fx = n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(n - 1);
      const double x = left + fx * plot_w;
      const double y = top + plot_h * (1.0 - series.open_debt[i] / debt_max);
      if (i > 0) points += ' ';
      points += format_fixed(x, 2) + ',' + format_fixed(y, 2);
    }
    svg += "  <polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"" +
           points + "\"/>\n";
    svg += "  <text x=\"70\" y=\"348\" font-size=\"11\" font-family=\"monospace\">" +
           format_instant(series.at.front()) + "</text>\n";
    svg += "  <text x=\"780\" y=\"348\" font-size=\"11\" font-family=\"monospace\" "
           "text-anchor=\"end\">" +
           format_instant(series.at.back()) + "</text>\n";
  }
  svg += "  <text x=\"66\" y=\"28\" font-size=\"11\" font-family=\"monospace\" "
         "text-anchor=\"end\">" +
         format_fixed(debt_max, 0) + "</text>\n";
  svg += "  <text x=\"66\" y=\"330\" font-size=\"11\" font-family=\"monospace\" "
         "text-anchor=\"end\">0</text>\n";
  svg += "  <text x=\"400\" y=\"380\" font-size=\"12\" font-family=\"monospace\" "
         "text-anchor=\"middle\">open technical debt (minutes) over time</text>\n";
  svg += "</svg>\n";
  return svg;
}

std::string render_ranking_csv(std::span<const RankedItem> items) {
  std::string out = "item_id,impact_score,cost_minutes,priority\n";
  for (const RankedItem& item : items) {
    out += item.item_id;
    out += ',' + format_double(item.impact_score);
    out += ',' + format_double(item.cost_minutes);
    out += ',' + format_double(item.priority);
    out += '\n';
  }
  return out;
}

}  // namespace tdebt
