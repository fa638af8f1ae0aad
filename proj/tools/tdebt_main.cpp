// tdebt: benchmark harness for predicting remediation-effort targets from
// project-level software metrics, plus debt-item lifecycle utilities.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tdebt/dropcol.hpp"
#include "tdebt/error.hpp"
#include "tdebt/eval.hpp"
#include "tdebt/features.hpp"
#include "tdebt/ingest.hpp"
#include "tdebt/lifecycle.hpp"
#include "tdebt/manifest.hpp"
#include "tdebt/model_io.hpp"
#include "tdebt/rng.hpp"
#include "tdebt/text.hpp"

namespace {

using namespace tdebt;

struct UsageError {
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::NotFound, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::NotFound, "cannot write '" + path + "'");
  out << content;
}

TargetKind parse_target_or_throw(const std::string& target) {
  if (target == "security")
    throw UsageError{"security remediation effort is stored but is not a prediction target"};
  auto kind = parse_target_kind(target);
  if (!kind)
    throw UsageError{"unknown target '" + target + "' (use maintainability or reliability)"};
  return *kind;
}

DistributionPolicy parse_policy_or_throw(const std::string& policy) {
  auto parsed = parse_distribution_policy(policy);
  if (!parsed)
    throw UsageError{"unknown distribution policy '" + policy +
                     "' (use weighted_sum, total or drop)"};
  return *parsed;
}

Grouping parse_grouping_or_throw(const std::string& grouping) {
  auto parsed = parse_grouping(grouping);
  if (!parsed) throw UsageError{"unknown grouping '" + grouping + "' (use row or project)"};
  return *parsed;
}

RegressorKind parse_kind_or_throw(const std::string& name) {
  auto kind = parse_kind(name);
  if (kind) return *kind;
  std::string valid;
  for (RegressorKind k : all_kinds()) {
    if (!valid.empty()) valid += ", ";
    valid += kind_name(k);
  }
  throw UsageError{"unknown regressor '" + name + "' (valid: " + valid + ")"};
}

/// Optional JSON file mapping kind name -> hyperparameter overrides.
std::map<std::string, std::map<std::string, double>> load_overrides(const std::string& path) {
  if (path.empty()) return {};
  nlohmann::json doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw Error(ErrorKind::Config, "config file '" + path + "' is not a JSON object");
  std::map<std::string, std::map<std::string, double>> out;
  for (const auto& [kind, params] : doc.items()) {
    if (!parse_kind(kind))
      throw Error(ErrorKind::Config, "config file names unknown regressor '" + kind + "'");
    if (!params.is_object())
      throw Error(ErrorKind::Config, "config for '" + kind + "' must be an object");
    for (const auto& [name, value] : params.items()) {
      if (!value.is_number())
        throw Error(ErrorKind::Config, "config value '" + kind + "." + name +
                                           "' must be numeric");
      out[kind][name] = value.get<double>();
    }
  }
  return out;
}

RegressorConfig make_config(RegressorKind kind, std::uint64_t run_seed,
                            const std::map<std::string, std::map<std::string, double>>& over) {
  RegressorConfig config;
  config.kind = kind;
  // Stable per-kind sub-seed: a regressor's row does not depend on which
  // other regressors were requested.
  config.seed = mix_seed(run_seed, static_cast<std::uint64_t>(kind));
  if (auto it = over.find(kind_name(kind)); it != over.end())
    config.hyperparameters = it->second;
  return config;
}

nlohmann::ordered_json config_to_json(const RegressorConfig& config) {
  nlohmann::ordered_json j;
  j["kind"] = kind_name(config.kind);
  j["seed"] = config.seed;
  auto resolved = default_hyperparameters(config.kind);
  for (const auto& [k, v] : config.hyperparameters) resolved[k] = v;
  j["hyperparameters"] = resolved;
  return j;
}

DesignMatrix load_matrix(const std::string& data_path, TargetKind target,
                         DistributionPolicy policy) {
  auto snapshots = parse_snapshot_csv(read_file(data_path));
  return build_matrix(snapshots, target, policy);
}

// ----- evaluate ------------------------------------------------------------

struct EvaluateArgs {
  std::string data, target = "maintainability", grouping = "row", format = "md";
  std::string regressors, out, config_file, policy = "weighted_sum";
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

int cmd_evaluate(const EvaluateArgs& args) {
  TargetKind target = parse_target_or_throw(args.target);
  DistributionPolicy policy = parse_policy_or_throw(args.policy);
  Grouping grouping = parse_grouping_or_throw(args.grouping);
  if (args.format != "md" && args.format != "csv")
    throw UsageError{"unknown format '" + args.format + "' (use md or csv)"};

  std::vector<RegressorKind> kinds;
  if (args.regressors.empty()) {
    kinds = all_kinds();
  } else {
    for (auto name : split(args.regressors, ','))
      kinds.push_back(parse_kind_or_throw(std::string(name)));
  }

  auto overrides = load_overrides(args.config_file);
  std::vector<RegressorConfig> configs;
  for (RegressorKind kind : kinds) configs.push_back(make_config(kind, args.seed, overrides));

  DesignMatrix matrix = load_matrix(args.data, target, policy);
  FoldPlan plan = make_folds(matrix.n(), args.folds, args.seed, grouping, matrix.groups);
  EvalReport report = evaluate_all(configs, matrix, plan, args.threads);

  for (const EvalRow& row : report.rows)
    for (const std::string& warning : row.warnings)
      std::cerr << "warning: " << kind_name(row.kind) << ": " << warning << "\n";

  std::string rendered =
      args.format == "md" ? render_report_markdown(report) : render_report_csv(report);
  if (args.out.empty()) {
    std::cout << rendered;
    return 0;
  }
  write_file(args.out, rendered);

  RunManifest manifest("evaluate");
  manifest.add_input(args.data);
  auto& cfg = manifest.config();
  cfg["data"] = args.data;
  cfg["target"] = target_kind_name(target);
  cfg["folds"] = args.folds;
  cfg["seed"] = args.seed;
  cfg["grouping"] = grouping_name(grouping);
  cfg["distribution_policy"] = distribution_policy_name(policy);
  cfg["format"] = args.format;
  cfg["regressors"] = nlohmann::ordered_json::array();
  for (const RegressorConfig& config : configs)
    cfg["regressors"].push_back(config_to_json(config));
  manifest.add_output(args.out);
  manifest.write_alongside(args.out);
  return 0;
}

// ----- importance ----------------------------------------------------------

struct ImportanceArgs {
  std::string data, target = "maintainability", regressor, grouping = "row";
  std::string out, config_file, policy = "weighted_sum", features;
  bool exhaustive = false;
  std::size_t folds = 10, max_p = kDefaultExhaustiveGuard;
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

int cmd_importance(const ImportanceArgs& args) {
  TargetKind target = parse_target_or_throw(args.target);
  DistributionPolicy policy = parse_policy_or_throw(args.policy);
  Grouping grouping = parse_grouping_or_throw(args.grouping);
  RegressorKind kind = parse_kind_or_throw(args.regressor);
  RegressorConfig config = make_config(kind, args.seed, load_overrides(args.config_file));

  DesignMatrix matrix = load_matrix(args.data, target, policy);
  if (!args.features.empty()) {
    std::vector<std::size_t> keep;
    for (auto name : split(args.features, ',')) {
      auto it = std::find(matrix.feature_names.begin(), matrix.feature_names.end(),
                          std::string(name));
      if (it == matrix.feature_names.end())
        throw UsageError{"--features names unknown metric '" + std::string(name) + "'"};
      keep.push_back(static_cast<std::size_t>(it - matrix.feature_names.begin()));
    }
    matrix = matrix.with_columns(keep);
  }
  FoldPlan plan = make_folds(matrix.n(), args.folds, args.seed, grouping, matrix.groups);

  ImportanceReport report = drop_column_importance(config, matrix, plan, args.threads);
  write_file(args.out, render_importance_csv(report));

  RunManifest manifest("importance");
  manifest.add_input(args.data);
  auto& cfg = manifest.config();
  cfg["data"] = args.data;
  cfg["target"] = target_kind_name(target);
  cfg["folds"] = args.folds;
  cfg["seed"] = args.seed;
  cfg["grouping"] = grouping_name(grouping);
  cfg["distribution_policy"] = distribution_policy_name(policy);
  cfg["regressor"] = config_to_json(config);
  cfg["exhaustive"] = args.exhaustive;
  cfg["max_p"] = args.max_p;
  cfg["features"] = args.features.empty() ? "all" : args.features;
  manifest.add_output(args.out);

  if (args.exhaustive) {
    auto scores = exhaustive_search(config, matrix, plan, args.max_p, args.threads);
    std::string subsets_path = args.out + ".subsets.csv";
    write_file(subsets_path, render_subsets_csv(scores));
    manifest.add_output(subsets_path);
  }
  manifest.write_alongside(args.out);
  return 0;
}

// ----- train / predict -----------------------------------------------------

struct TrainArgs {
  std::string data, target = "maintainability", regressor, out, config_file;
  std::string policy = "weighted_sum";
  std::uint64_t seed = 42;
};

int cmd_train(const TrainArgs& args) {
  TargetKind target = parse_target_or_throw(args.target);
  DistributionPolicy policy = parse_policy_or_throw(args.policy);
  RegressorKind kind = parse_kind_or_throw(args.regressor);
  RegressorConfig config = make_config(kind, args.seed, load_overrides(args.config_file));

  DesignMatrix matrix = load_matrix(args.data, target, policy);
  std::vector<std::size_t> all_rows(matrix.n());
  for (std::size_t i = 0; i < matrix.n(); ++i) all_rows[i] = i;
  DesignMatrix imputed = impute_median(matrix, all_rows);

  FittedModel model = fit(config, imputed.rows, imputed.target, imputed.feature_names);
  write_file(args.out, serialize_model(model));

  RunManifest manifest("train");
  manifest.add_input(args.data);
  auto& cfg = manifest.config();
  cfg["data"] = args.data;
  cfg["target"] = target_kind_name(target);
  cfg["seed"] = args.seed;
  cfg["distribution_policy"] = distribution_policy_name(policy);
  cfg["regressor"] = config_to_json(config);
  manifest.add_output(args.out);
  manifest.write_alongside(args.out);
  return 0;
}

struct PredictArgs {
  std::string model, data, target = "maintainability", out;
  std::string policy = "weighted_sum";
};

int cmd_predict(const PredictArgs& args) {
  TargetKind target = parse_target_or_throw(args.target);
  DistributionPolicy policy = parse_policy_or_throw(args.policy);

  FittedModel model = deserialize_model(read_file(args.model));
  auto snapshots = parse_snapshot_csv(read_file(args.data));
  DesignMatrix matrix = build_matrix(snapshots, target, policy);
  if (matrix.feature_names != model.feature_names)
    throw Error(ErrorKind::Shape,
                "model features do not match the data's feature columns "
                "(check --distribution-policy)");
  std::vector<std::size_t> all_rows(matrix.n());
  for (std::size_t i = 0; i < matrix.n(); ++i) all_rows[i] = i;
  DesignMatrix imputed = impute_median(matrix, all_rows);
  std::vector<double> predictions = predict(model, imputed.rows);

  std::string csv = "project,commit_sha,actual,predicted\n";
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    csv += snapshots[i].project_id + ',' + snapshots[i].commit_sha + ',' +
           format_double(imputed.target[i]) + ',' + format_double(predictions[i]) + '\n';
  }
  write_file(args.out, csv);

  RunManifest manifest("predict");
  manifest.add_input(args.model);
  manifest.add_input(args.data);
  auto& cfg = manifest.config();
  cfg["model"] = args.model;
  cfg["data"] = args.data;
  cfg["target"] = target_kind_name(target);
  cfg["distribution_policy"] = distribution_policy_name(policy);
  manifest.add_output(args.out);
  manifest.write_alongside(args.out);
  return 0;
}

// ----- simulate / rank / series ---------------------------------------------

struct SimulateArgs {
  std::size_t items = 50;
  std::int64_t horizon_days = 365;
  std::uint64_t seed = 42;
  SimulationParams params;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
  auto events = simulate_events(args.items, args.horizon_days, args.seed, args.params);
  write_file(args.out, render_events_csv(events));

  RunManifest manifest("simulate");
  auto& cfg = manifest.config();
  cfg["items"] = args.items;
  cfg["horizon_days"] = args.horizon_days;
  cfg["seed"] = args.seed;
  cfg["intro_rate"] = args.params.intro_rate;
  cfg["removal_prob"] = args.params.removal_prob;
  cfg["reintro_prob"] = args.params.reintro_prob;
  cfg["cost_min"] = args.params.cost_min;
  cfg["cost_max"] = args.params.cost_max;
  manifest.add_output(args.out);
  manifest.write_alongside(args.out);
  return 0;
}

struct RankArgs {
  std::string events, out;
  double bug_weight = 1.0, change_weight = 1.0;
  bool prefer_costly = false;
};

int cmd_rank(const RankArgs& args) {
  auto events = parse_events_csv(read_file(args.events));
  auto timelines = build_timelines(events);
  RankWeights weights{args.bug_weight, args.change_weight};
  auto ranked = rank_items(timelines, weights,
                           args.prefer_costly ? CostOrder::ExpensiveFirst
                                              : CostOrder::CheapFirst);
  write_file(args.out, render_ranking_csv(ranked));

  RunManifest manifest("rank");
  manifest.add_input(args.events);
  auto& cfg = manifest.config();
  cfg["events"] = args.events;
  cfg["bug_weight"] = args.bug_weight;
  cfg["change_weight"] = args.change_weight;
  cfg["prefer_costly"] = args.prefer_costly;
  manifest.add_output(args.out);
  manifest.write_alongside(args.out);
  return 0;
}

struct SeriesArgs {
  std::string events, start, end, out, plot;
  std::int64_t step_days = 1;
};

int cmd_series(const SeriesArgs& args) {
  auto events = parse_events_csv(read_file(args.events));
  auto timelines = build_timelines(events);
  Instant start = parse_instant(args.start);
  Instant end = parse_instant(args.end);
  DebtSeries series = debt_series(timelines, start, end, args.step_days * kSecondsPerDay);
  write_file(args.out, render_series_csv(series));

  RunManifest manifest("series");
  manifest.add_input(args.events);
  auto& cfg = manifest.config();
  cfg["events"] = args.events;
  cfg["start"] = format_instant(start);
  cfg["end"] = format_instant(end);
  cfg["step_days"] = args.step_days;
  manifest.add_output(args.out);
  if (!args.plot.empty()) {
    write_file(args.plot, render_series_svg(series));
    manifest.add_output(args.plot);
  }
  manifest.write_alongside(args.out);
  return 0;
}

// ----- fetch -----------------------------------------------------------------

struct FetchArgs {
  std::string server, project, out, token_env, url_template;
  std::int64_t interval_days = 180;
};

int cmd_fetch(const FetchArgs& args) {
  std::optional<std::string> token;
  if (!args.token_env.empty()) {
    const char* value = std::getenv(args.token_env.c_str());
    if (!value)
      throw UsageError{"environment variable '" + args.token_env + "' is not set"};
    token = value;
  }

  std::vector<std::string> keys;
  for (auto key : schema::kMetricColumns) keys.emplace_back(key);
  for (auto key : schema::kTargetColumns) keys.emplace_back(key);

  FetchOptions options;
  if (!args.url_template.empty()) options.url_template = args.url_template;

  auto snapshots = fetch_snapshots(args.server, args.project, keys, token, options);
  snapshots = sample_interval(std::move(snapshots), args.interval_days);
  write_file(args.out, render_snapshot_csv(snapshots));

  RunManifest manifest("fetch");
  auto& cfg = manifest.config();
  cfg["server"] = args.server;
  cfg["project"] = args.project;
  cfg["interval_days"] = args.interval_days;
  cfg["url_template"] = options.url_template;
  manifest.add_output(args.out);
  manifest.write_alongside(args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"technical-debt regression benchmark and lifecycle toolkit"};
  app.require_subcommand(1);

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand(
      "evaluate", "cross-validate the regressors and write the MAE/R2 report");
  evaluate->add_option("--data", ev.data, "snapshot CSV")->required();
  evaluate->add_option("--target", ev.target, "maintainability | reliability");
  evaluate->add_option("--folds", ev.folds, "fold count (default 10)");
  evaluate->add_option("--seed", ev.seed, "seed for folds and regressors (default 42)");
  evaluate->add_option("--grouping", ev.grouping, "row | project (default row)");
  evaluate->add_option("--regressors", ev.regressors,
                       "comma-separated kinds (default: all 8)");
  evaluate->add_option("--out", ev.out, "report path (default stdout, no manifest)");
  evaluate->add_option("--format", ev.format, "md | csv (default md)");
  evaluate->add_option("--distribution-policy", ev.policy,
                       "weighted_sum | total | drop (default weighted_sum)");
  evaluate->add_option("--config", ev.config_file, "JSON hyperparameter overrides");
  evaluate->add_option("--threads", ev.threads, "worker threads (default 1)");

  ImportanceArgs im;
  auto* importance =
      app.add_subcommand("importance", "drop-column feature importance for one regressor");
  importance->add_option("--data", im.data, "snapshot CSV")->required();
  importance->add_option("--target", im.target, "maintainability | reliability");
  importance->add_option("--regressor", im.regressor, "regressor kind")->required();
  importance->add_flag("--exhaustive", im.exhaustive,
                       "also evaluate every feature subset (guarded by --max-p)");
  importance->add_option("--max-p", im.max_p, "exhaustive-search guard (default 12)");
  importance->add_option("--folds", im.folds, "fold count (default 10)");
  importance->add_option("--seed", im.seed, "seed (default 42)");
  importance->add_option("--grouping", im.grouping, "row | project (default row)");
  importance->add_option("--out", im.out, "importance CSV path")->required();
  importance->add_option("--features", im.features,
                         "restrict to these comma-separated metric columns");
  importance->add_option("--distribution-policy", im.policy,
                         "weighted_sum | total | drop (default weighted_sum)");
  importance->add_option("--config", im.config_file, "JSON hyperparameter overrides");
  importance->add_option("--threads", im.threads, "worker threads (default 1)");

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "fit one regressor on all rows and save it");
  train->add_option("--data", tr.data, "snapshot CSV")->required();
  train->add_option("--target", tr.target, "maintainability | reliability");
  train->add_option("--regressor", tr.regressor, "regressor kind")->required();
  train->add_option("--seed", tr.seed, "seed (default 42)");
  train->add_option("--out", tr.out, "model JSON path")->required();
  train->add_option("--distribution-policy", tr.policy,
                    "weighted_sum | total | drop (default weighted_sum)");
  train->add_option("--config", tr.config_file, "JSON hyperparameter overrides");

  PredictArgs pr;
  auto* predict_cmd = app.add_subcommand("predict", "apply a saved model to a snapshot CSV");
  predict_cmd->add_option("--model", pr.model, "model JSON path")->required();
  predict_cmd->add_option("--data", pr.data, "snapshot CSV")->required();
  predict_cmd->add_option("--target", pr.target, "maintainability | reliability");
  predict_cmd->add_option("--out", pr.out, "predictions CSV path")->required();
  predict_cmd->add_option("--distribution-policy", pr.policy,
                          "weighted_sum | total | drop (default weighted_sum)");

  SimulateArgs si;
  auto* simulate = app.add_subcommand("simulate", "generate a deterministic event history");
  simulate->add_option("--items", si.items, "item count (default 50)");
  simulate->add_option("--horizon-days", si.horizon_days, "days simulated (default 365)");
  simulate->add_option("--seed", si.seed, "seed (default 42)");
  simulate->add_option("--intro-rate", si.params.intro_rate,
                       "per-day introduction probability");
  simulate->add_option("--removal-prob", si.params.removal_prob,
                       "per-day removal probability");
  simulate->add_option("--reintro-prob", si.params.reintro_prob,
                       "per-day reintroduction probability");
  simulate->add_option("--cost-min", si.params.cost_min, "minimum remediation minutes");
  simulate->add_option("--cost-max", si.params.cost_max, "maximum remediation minutes");
  simulate->add_option("--out", si.out, "events CSV path")->required();

  RankArgs ra;
  auto* rank = app.add_subcommand("rank", "rank debt items by impact vs remediation cost");
  rank->add_option("--events", ra.events, "events CSV")->required();
  rank->add_option("--bug-weight", ra.bug_weight, "weight per observed bug (default 1)");
  rank->add_option("--change-weight", ra.change_weight,
                   "weight per observed change (default 1)");
  rank->add_flag("--prefer-costly", ra.prefer_costly,
                 "invert the cost ordering (impact times cost)");
  rank->add_option("--out", ra.out, "ranking CSV path")->required();

  SeriesArgs se;
  auto* series = app.add_subcommand("series", "sample the open-debt curve over a time range");
  series->add_option("--events", se.events, "events CSV")->required();
  series->add_option("--start", se.start, "range start (ISO-8601)")->required();
  series->add_option("--end", se.end, "range end (ISO-8601, inclusive)")->required();
  series->add_option("--step-days", se.step_days, "sample spacing in days (default 1)");
  series->add_option("--out", se.out, "series CSV path")->required();
  series->add_option("--plot", se.plot, "optional SVG chart path");

  FetchArgs fe;
  auto* fetch = app.add_subcommand("fetch", "pull snapshots from a metrics server");
  fetch->add_option("--server", fe.server, "server base URL")->required();
  fetch->add_option("--project", fe.project, "project key")->required();
  fetch->add_option("--interval-days", fe.interval_days,
                    "down-sampling interval (default 180)");
  fetch->add_option("--out", fe.out, "snapshot CSV path")->required();
  fetch->add_option("--token-env", fe.token_env,
                    "environment variable holding the auth token");
  fetch->add_option("--url-template", fe.url_template,
                    "endpoint template with {project} {metrics} {page}");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 2;
  }

  try {
    if (*evaluate) return cmd_evaluate(ev);
    if (*importance) return cmd_importance(im);
    if (*train) return cmd_train(tr);
    if (*predict_cmd) return cmd_predict(pr);
    if (*simulate) return cmd_simulate(si);
    if (*rank) return cmd_rank(ra);
    if (*series) return cmd_series(se);
    if (*fetch) return cmd_fetch(fe);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
