#include "tdebt/eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "tdebt/error.hpp"
#include "tdebt/parallel.hpp"
#include "tdebt/rng.hpp"
#include "tdebt/text.hpp"

namespace tdebt {

const char* grouping_name(Grouping grouping) {
  return grouping == Grouping::RowShuffle ? "row" : "project";
}

std::optional<Grouping> parse_grouping(std::string_view name) {
  if (name == "row") return Grouping::RowShuffle;
  if (name == "project") return Grouping::ByProject;
  return std::nullopt;
}

double mae(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size())
    throw Error(ErrorKind::Precondition, "mae: length mismatch");
  if (actual.empty()) throw Error(ErrorKind::Precondition, "mae: empty vectors");
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (!std::isfinite(actual[i]) || !std::isfinite(predicted[i]))
      throw Error(ErrorKind::Precondition, "mae: non-finite entry");
    sum += std::abs(actual[i] - predicted[i]);
  }
  return sum / static_cast<double>(actual.size());
}

double r_squared(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size())
    throw Error(ErrorKind::Precondition, "r_squared: length mismatch");
  if (actual.size() < 2) throw Error(ErrorKind::Precondition, "r_squared: need n >= 2");
  double mean = 0.0;
  for (double v : actual) {
    if (!std::isfinite(v)) throw Error(ErrorKind::Precondition, "r_squared: non-finite entry");
    mean += v;
  }
  mean /= static_cast<double>(actual.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (!std::isfinite(predicted[i]))
      throw Error(ErrorKind::Precondition, "r_squared: non-finite entry");
    const double res = actual[i] - predicted[i];
    const double dev = actual[i] - mean;
    ss_res += res * res;
    ss_tot += dev * dev;
  }
  if (ss_tot == 0.0)
    throw Error(ErrorKind::UndefinedScore, "r_squared: actual values have zero variance");
  return 1.0 - ss_res / ss_tot;
}

FoldPlan make_folds(std::size_t n, std::size_t k, std::uint64_t seed, Grouping grouping,
                    std::span<const std::string> groups) {
  if (k < 2) throw Error(ErrorKind::Fold, "make_folds: k must be >= 2");
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.grouping = grouping;
  plan.assignments.assign(n, 0);

  if (grouping == Grouping::RowShuffle) {
    if (n < k)
      throw Error(ErrorKind::Fold, "make_folds: n = " + std::to_string(n) +
                                       " rows cannot fill k = " + std::to_string(k) + " folds");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(mix_seed(seed, 0x5EEDull));
    rng.shuffle(order);
    for (std::size_t i = 0; i < n; ++i) plan.assignments[order[i]] = i % k;
    return plan;
  }

  if (groups.size() != n)
    throw Error(ErrorKind::Fold, "make_folds: ByProject requires one group label per row");
  struct GroupInfo {
    std::string name;
    std::vector<std::size_t> rows;
  };
  std::vector<GroupInfo> infos;
  for (std::size_t i = 0; i < n; ++i) {
    auto it = std::find_if(infos.begin(), infos.end(),
                           [&](const GroupInfo& g) { return g.name == groups[i]; });
    if (it == infos.end()) {
      infos.push_back({std::string(groups[i]), {i}});
    } else {
      it->rows.push_back(i);
    }
  }
  if (infos.size() < k)
    throw Error(ErrorKind::Fold, "make_folds: only " + std::to_string(infos.size()) +
                                     " distinct projects for k = " + std::to_string(k));
  // Largest group first, then name; assignment therefore depends only on the
  // group multiset, never on row order. The seed plays no role here.
  std::sort(infos.begin(), infos.end(), [](const GroupInfo& a, const GroupInfo& b) {
    if (a.rows.size() != b.rows.size()) return a.rows.size() > b.rows.size();
    return a.name < b.name;
  });
  std::vector<std::size_t> load(k, 0);
  for (const GroupInfo& g : infos) {
    std::size_t best = 0;
    for (std::size_t f = 1; f < k; ++f)
      if (load[f] < load[best]) best = f;
    for (std::size_t row : g.rows) plan.assignments[row] = best;
    load[best] += g.rows.size();
  }
  return plan;
}

namespace {

struct FoldOutcome {
  double mae_score = 0.0;
  double r2_score = 0.0;
  bool r2_valid = false;
  std::string warning;
};

// Canonical order: sort row indices by cell bit patterns (then target and
// group), so every score is a pure function of the row multiset rather than
// the incoming row order.
void sort_canonical(std::vector<std::size_t>& idx, const DesignMatrix& m) {
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    for (std::size_t j = 0; j < m.p(); ++j) {
      const auto ka = std::bit_cast<std::uint64_t>(m.rows(a, j));
      const auto kb = std::bit_cast<std::uint64_t>(m.rows(b, j));
      if (ka != kb) return ka < kb;
    }
    const auto ta = std::bit_cast<std::uint64_t>(m.target[a]);
    const auto tb = std::bit_cast<std::uint64_t>(m.target[b]);
    if (ta != tb) return ta < tb;
    return m.groups[a] < m.groups[b];
  });
}

bool has_missing(const DesignMatrix& m) {
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.p(); ++j)
      if (is_missing(m.rows(i, j))) return true;
  return false;
}

FoldOutcome eval_fold(const RegressorConfig& config, const DesignMatrix& matrix,
                      const FoldPlan& plan, std::size_t fold, bool needs_imputation) {
  std::vector<std::size_t> train, test;
  for (std::size_t i = 0; i < plan.assignments.size(); ++i)
    (plan.assignments[i] == fold ? test : train).push_back(i);
  if (train.empty() || test.empty())
    throw Error(ErrorKind::Fold, "fold " + std::to_string(fold) + " is empty");
  sort_canonical(train, matrix);
  sort_canonical(test, matrix);

  const DesignMatrix* source = &matrix;
  DesignMatrix imputed;
  if (needs_imputation) {
    imputed = impute_median(matrix, train);
    source = &imputed;
  }

  Matrix x_train = source->rows.select_rows(train);
  Matrix x_test = source->rows.select_rows(test);
  std::vector<double> y_train, y_test;
  y_train.reserve(train.size());
  y_test.reserve(test.size());
  for (std::size_t i : train) y_train.push_back(source->target[i]);
  for (std::size_t i : test) y_test.push_back(source->target[i]);

  RegressorConfig fold_config = config;
  fold_config.seed = mix_seed(mix_seed(config.seed, plan.seed), fold);

  FittedModel model = fit(fold_config, x_train, y_train, source->feature_names);
  std::vector<double> predictions = predict(model, x_test);

  FoldOutcome out;
  out.mae_score = mae(y_test, predictions);
  const double first = y_test.front();
  const bool constant = std::all_of(y_test.begin(), y_test.end(),
                                    [&](double v) { return v == first; });
  if (constant) {
    out.warning = "fold " + std::to_string(fold) +
                  ": zero variance in held-out targets, excluded from R2";
  } else {
    out.r2_score = r_squared(y_test, predictions);
    out.r2_valid = true;
  }
  return out;
}

double sample_std(std::span<const double> values, double mean) {
  if (values.size() < 2) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

EvalRow aggregate(RegressorKind kind, std::span<const FoldOutcome> outcomes) {
  EvalRow row;
  row.kind = kind;
  std::vector<double> maes, r2s;
  for (const FoldOutcome& o : outcomes) {
    maes.push_back(o.mae_score);
    if (o.r2_valid) r2s.push_back(o.r2_score);
    if (!o.warning.empty()) row.warnings.push_back(o.warning);
  }
  row.mae_mean = std::accumulate(maes.begin(), maes.end(), 0.0) /
                 static_cast<double>(maes.size());
  row.mae_std = sample_std(maes, row.mae_mean);
  if (r2s.empty()) {
    row.r2_mean = std::numeric_limits<double>::quiet_NaN();
    row.r2_std = std::numeric_limits<double>::quiet_NaN();
  } else {
    row.r2_mean = std::accumulate(r2s.begin(), r2s.end(), 0.0) /
                  static_cast<double>(r2s.size());
    row.r2_std = sample_std(r2s, row.r2_mean);
  }
  return row;
}

}  // namespace

EvalReport evaluate_all(std::span<const RegressorConfig> configs, const DesignMatrix& matrix,
                        const FoldPlan& plan, unsigned threads) {
  if (configs.empty())
    throw Error(ErrorKind::Precondition, "evaluate_all: no regressor configs");
  if (plan.assignments.size() != matrix.n())
    throw Error(ErrorKind::Shape, "evaluate_all: plan covers " +
                                      std::to_string(plan.assignments.size()) +
                                      " rows, matrix has " + std::to_string(matrix.n()));

  const bool needs_imputation = has_missing(matrix);
  const std::size_t k = plan.k;
  std::vector<FoldOutcome> outcomes(configs.size() * k);
  parallel_for(outcomes.size(), threads, [&](std::size_t task) {
    const std::size_t config_idx = task / k;
    const std::size_t fold = task % k;
    outcomes[task] = eval_fold(configs[config_idx], matrix, plan, fold, needs_imputation);
  });

  EvalReport report;
  report.target_kind = matrix.target_kind;
  report.k = k;
  report.seed = plan.seed;
  report.grouping = plan.grouping;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    report.rows.push_back(
        aggregate(configs[c].kind, std::span(outcomes).subspan(c * k, k)));
  }
  return report;
}

EvalRow cross_validate(const RegressorConfig& config, const DesignMatrix& matrix,
                       const FoldPlan& plan, unsigned threads) {
  return evaluate_all(std::span(&config, 1), matrix, plan, threads).rows.front();
}

std::string render_report_markdown(const EvalReport& report) {
  std::string out;
  out += "Target: ";
  out += target_kind_name(report.target_kind);
  out += " | folds: " + std::to_string(report.k);
  out += " | seed: " + std::to_string(report.seed);
  out += " | grouping: ";
  out += grouping_name(report.grouping);
  out += "\n\n";
  out += "| Regressor | MAE | MAE_std | R2 | R2_std |\n";
  out += "|---|---:|---:|---:|---:|\n";
  for (const EvalRow& row : report.rows) {
    out += "| ";
    out += kind_display_name(row.kind);
    out += " | " + format_fixed(row.mae_mean, 3);
    out += " | " + format_fixed(row.mae_std, 3);
    out += " | " + format_fixed(row.r2_mean, 3);
    out += " | " + format_fixed(row.r2_std, 3);
    out += " |\n";
  }
  return out;
}

std::string render_report_csv(const EvalReport& report) {
  std::string out = "Regressor,MAE,MAE_std,R2,R2_std\n";
  for (const EvalRow& row : report.rows) {
    out += kind_display_name(row.kind);
    out += ',' + format_double(row.mae_mean);
    out += ',' + format_double(row.mae_std);
    out += ',' + format_double(row.r2_mean);
    out += ',' + format_double(row.r2_std);
    out += '\n';
  }
  return out;
}

}  // namespace tdebt
