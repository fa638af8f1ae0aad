#include "tdebt/dropcol.hpp"

#include <algorithm>
#include <numeric>

#include "tdebt/error.hpp"
#include "tdebt/parallel.hpp"
#include "tdebt/text.hpp"

namespace tdebt {

ImportanceReport drop_column_importance(const RegressorConfig& config,
                                        const DesignMatrix& matrix, const FoldPlan& plan,
                                        unsigned threads) {
  const std::size_t p = matrix.p();
  if (p < 2)
    throw Error(ErrorKind::Precondition, "drop_column_importance: need at least 2 features");

  // Task 0 is the full-matrix baseline, task j+1 drops feature j. Each task
  // runs its folds serially; parallelism is across tasks.
  std::vector<EvalRow> rows(p + 1);
  parallel_for(p + 1, threads, [&](std::size_t task) {
    if (task == 0) {
      rows[0] = cross_validate(config, matrix, plan, 1);
      return;
    }
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < p; ++j)
      if (j != task - 1) keep.push_back(j);
    rows[task] = cross_validate(config, matrix.with_columns(keep), plan, 1);
  });

  ImportanceReport report;
  report.kind = config.kind;
  report.baseline_mae = rows[0].mae_mean;
  report.baseline_r2 = rows[0].r2_mean;
  report.k = plan.k;
  report.seed = plan.seed;
  for (std::size_t j = 0; j < p; ++j) {
    ImportanceEntry entry;
    entry.feature_name = matrix.feature_names[j];
    entry.mae_delta = rows[j + 1].mae_mean - report.baseline_mae;
    entry.r2_delta = report.baseline_r2 - rows[j + 1].r2_mean;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::map<std::vector<std::string>, SubsetScore> exhaustive_search(const RegressorConfig& config,
                                                                  const DesignMatrix& matrix,
                                                                  const FoldPlan& plan,
                                                                  std::size_t max_p,
                                                                  unsigned threads) {
  const std::size_t p = matrix.p();
  if (p == 0) throw Error(ErrorKind::Precondition, "exhaustive_search: no features");
  if (p > max_p)
    throw Error(ErrorKind::Guard,
                "exhaustive_search: " + std::to_string(p) + " features would need 2^" +
                    std::to_string(p) + " - 1 = " +
                    std::to_string((std::uint64_t{1} << p) - 1) +
                    " evaluations (guard max_p = " + std::to_string(max_p) + ")");

  const std::uint64_t n_subsets = (std::uint64_t{1} << p) - 1;
  std::vector<SubsetScore> scores(n_subsets);
  parallel_for(n_subsets, threads, [&](std::size_t task) {
    const std::uint64_t mask = task + 1;
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < p; ++j)
      if (mask & (std::uint64_t{1} << j)) keep.push_back(j);
    EvalRow row = cross_validate(config, matrix.with_columns(keep), plan, 1);
    scores[task] = {row.mae_mean, row.r2_mean};
  });

  std::map<std::vector<std::string>, SubsetScore> out;
  for (std::uint64_t mask = 1; mask <= n_subsets; ++mask) {
    std::vector<std::string> key;
    for (std::size_t j = 0; j < p; ++j)
      if (mask & (std::uint64_t{1} << j)) key.push_back(matrix.feature_names[j]);
    std::sort(key.begin(), key.end());
    out.emplace(std::move(key), scores[mask - 1]);
  }
  return out;
}

std::string render_importance_csv(const ImportanceReport& report) {
  std::string out = "feature,mae_delta,r2_delta\n";
  out += "__baseline__," + format_double(report.baseline_mae) + ',' +
         format_double(report.baseline_r2) + '\n';
  for (const ImportanceEntry& e : report.entries) {
    out += e.feature_name;
    out += ',' + format_double(e.mae_delta);
    out += ',' + format_double(e.r2_delta);
    out += '\n';
  }
  return out;
}

std::string render_subsets_csv(const std::map<std::vector<std::string>, SubsetScore>& scores) {
  std::string out = "features,mae,r2\n";
  for (const auto& [key, score] : scores) {
    out += join(key, ";");
    out += ',' + format_double(score.mae);
    out += ',' + format_double(score.r2);
    out += '\n';
  }
  return out;
}

}  // namespace tdebt
