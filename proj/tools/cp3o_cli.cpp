// Command-line front end: change point detection on CSV data, simulation
// benchmarks, and pruning diagnostics.
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cp3o/cp3o.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;

struct CommonOpts {
  std::string metric = "energy";
  std::optional<double> alpha;
  std::optional<int> delta;
  int max_changes = 5;
  std::optional<int> min_size;
  bool no_prune = false;
  std::uint64_t seed = 0;
  std::string output;
  std::string format = "json";
};

void add_metric_flags(CLI::App* cmd, CommonOpts& o,
                      bool single_metric = true) {
  if (single_metric)
    cmd->add_option("--metric", o.metric,
                    "Divergence: energy|energy-complete|ks|ks-windowed")
        ->default_val("energy");
  cmd->add_option("--alpha", o.alpha, "Energy exponent in (0,2]");
  cmd->add_option("--delta", o.delta,
                  "Window for incomplete/windowed statistics (default w-1)");
  cmd->add_option("--K", o.max_changes, "Maximum number of change points")
      ->default_val(5);
  cmd->add_option("--min-size", o.min_size,
                  "Minimum segment length w (default ~1.5*sqrt(T))");
  cmd->add_flag("--no-prune", o.no_prune, "Disable search-space pruning");
  cmd->add_option("--seed", o.seed, "Master seed for all randomness")
      ->default_val(0);
  cmd->add_option("--output", o.output, "Output path (stdout when omitted)");
}

int default_min_size(int T) {
  return std::max(2, static_cast<int>(std::lround(1.5 * std::sqrt(
                          static_cast<double>(T)))));
}

cp3o::Cp3oConfig build_config(const CommonOpts& o, int T,
                              cp3o::ScenarioKind scenario_kind,
                              bool scenario_based) {
  cp3o::Cp3oConfig cfg;
  cfg.max_changes = o.max_changes;
  cfg.min_size = o.min_size.value_or(default_min_size(T));
  cfg.metric.kind = cp3o::metric_kind_from_name(o.metric);
  cfg.pruning = !o.no_prune;
  if (o.alpha) {
    cfg.metric.alpha = *o.alpha;
  } else if (scenario_based && scenario_kind == cp3o::ScenarioKind::HeavyTail &&
             cp3o::metric_uses_alpha(cfg.metric.kind)) {
    cfg.metric.alpha = 0.09;  // heavy tails need alpha < 0.1 moments
  }
  if (o.delta) cfg.metric.delta = *o.delta;
  return cfg;
}

std::string metric_echo(const cp3o::GofMetric& m) {
  std::ostringstream out;
  out << cp3o::metric_kind_name(m.kind);
  std::vector<std::string> params;
  if (cp3o::metric_uses_alpha(m.kind))
    params.push_back("alpha=" + cp3o::format_double(m.alpha));
  if (cp3o::metric_uses_delta(m.kind) && m.delta)
    params.push_back("delta=" + std::to_string(*m.delta));
  if (!params.empty()) {
    out << "[";
    for (std::size_t i = 0; i < params.size(); ++i)
      out << (i ? ";" : "") << params[i];
    out << "]";
  }
  return out.str();
}

void emit(const std::string& output_path, const std::string& content) {
  if (output_path.empty())
    std::cout << content;
  else
    cp3o::write_text_file(output_path, content);
}

// ---- detect ----------------------------------------------------------------

struct DetectOpts {
  CommonOpts common;
  std::string input;
  std::string columns;
  std::vector<std::string> transforms;
  std::string header = "auto";
};

int run_detect(const DetectOpts& o) {
  cp3o::HeaderMode mode = cp3o::HeaderMode::Auto;
  if (o.header == "yes")
    mode = cp3o::HeaderMode::Yes;
  else if (o.header == "no")
    mode = cp3o::HeaderMode::No;
  else if (o.header != "auto")
    throw cp3o::ConfigError("--header expects auto|yes|no");

  const auto table = cp3o::read_csv(o.input, mode);
  const auto cols = cp3o::resolve_columns(table, o.columns);
  int diffs = 0;
  const auto series = cp3o::apply_transforms(
      cp3o::table_to_series(table, cols), o.transforms, &diffs);

  const auto cfg =
      build_config(o.common, series.rows(), cp3o::ScenarioKind::GaussianMeanVar,
                   false);
  const auto result = cp3o::run_cp3o(series, cfg);
  const auto checked = cp3o::validate_config(series, cfg);

  cp3o::json echo;
  echo["input"] = o.input;
  echo["columns"] = table.columns;
  std::vector<std::string> selected;
  for (int c : cols) selected.push_back(table.columns[c]);
  echo["selected_columns"] = selected;
  echo["transforms"] = o.transforms;
  echo["header_detected"] = table.header_detected;
  echo["metric"] = cp3o::metric_to_json(checked.metric);
  echo["K"] = checked.max_changes;
  echo["w"] = checked.min_size;
  echo["pruning"] = checked.pruning;
  echo["seed"] = o.common.seed;
  echo["series_length"] = series.rows();
  echo["series_dim"] = series.dim();
  echo["k_capped"] = result.k_capped;
  echo["knee_fallback"] = result.knee_fallback;

  // post-transform index tau corresponds to input data row tau + #diffs
  std::vector<int> original_rows;
  for (int tau : result.change_points.change_points)
    original_rows.push_back(tau + diffs);

  if (o.common.format == "json") {
    emit(o.common.output,
         cp3o::detection_to_json(result, echo, original_rows).dump(2) + "\n");
  } else if (o.common.format == "csv") {
    emit(o.common.output, cp3o::detection_csv(result, original_rows));
  } else {
    throw cp3o::ConfigError("--format expects json|csv");
  }
  return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateOpts {
  CommonOpts common;
  std::vector<std::string> scenarios{"gaussian"};
  std::vector<int> lengths{400};
  std::vector<std::string> metrics;
  int trials = 100;
  int threads = 0;
};

int run_simulate(const SimulateOpts& o) {
  const std::vector<std::string> metrics =
      o.metrics.empty() ? std::vector<std::string>{o.common.metric}
                        : o.metrics;
  std::ostringstream out;
  out << "scenario,T,metric,mean_rand,mean_t2e,mean_e2t,mean_est_k,"
         "mean_runtime_s\n";
  for (const auto& scenario : o.scenarios) {
    const auto kind = cp3o::scenario_from_name(scenario);
    for (int T : o.lengths) {
      for (const auto& metric : metrics) {
        CommonOpts common = o.common;
        common.metric = metric;
        const auto cfg = build_config(common, T, kind, true);
        cp3o::ScenarioSpec spec{kind, T, 3, o.common.seed};
        const auto bench = cp3o::run_benchmark(spec, cfg, o.trials, o.threads);
        const auto checked_metric =
            cp3o::validate_config(cp3o::generate_scenario(spec).first, cfg)
                .metric;
        out << scenario << "," << T << "," << metric_echo(checked_metric)
            << "," << cp3o::format_double(bench.mean_rand) << ","
            << cp3o::format_double(bench.mean_t2e) << ","
            << cp3o::format_double(bench.mean_e2t) << ","
            << cp3o::format_double(bench.mean_est_k) << ","
            << cp3o::format_double(bench.mean_runtime_s) << "\n";
      }
    }
  }
  emit(o.common.output, out.str());
  return kExitOk;
}

// ---- prune-stats -----------------------------------------------------------

struct PruneOpts {
  CommonOpts common;
  std::string input;
  std::string columns;
  std::vector<std::string> transforms;
  std::string scenario;
  int length = 400;
};

int run_prune_stats(const PruneOpts& o) {
  std::optional<cp3o::TimeSeries> series;
  if (!o.input.empty()) {
    const auto table = cp3o::read_csv(o.input, cp3o::HeaderMode::Auto);
    series = cp3o::apply_transforms(
        cp3o::table_to_series(table, cp3o::resolve_columns(table, o.columns)),
        o.transforms, nullptr);
  } else if (!o.scenario.empty()) {
    cp3o::ScenarioSpec spec{cp3o::scenario_from_name(o.scenario), o.length, 3,
                            o.common.seed};
    series = generate_scenario(spec).first;
  } else {
    throw cp3o::ConfigError("prune-stats needs --input or --scenario");
  }
  const auto cfg = build_config(
      o.common, series->rows(),
      o.scenario.empty() ? cp3o::ScenarioKind::GaussianMeanVar
                         : cp3o::scenario_from_name(o.scenario),
      !o.scenario.empty());
  const auto result = cp3o::run_cp3o(*series, cfg);
  emit(o.common.output, cp3o::prune_sizes_csv(result));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cp3o: nonparametric multiple change point detection"};
  app.require_subcommand(1);

  DetectOpts det;
  auto* detect = app.add_subcommand("detect", "Detect change points in a CSV");
  detect->add_option("--input", det.input, "CSV input path")->required();
  detect->add_option("--columns", det.columns,
                     "Comma-separated column names or 1-based indices");
  detect->add_option("--transform", det.transforms,
                     "Transform to apply in order: log|diff (repeatable)");
  detect->add_option("--header", det.header, "Header handling: auto|yes|no")
      ->default_val("auto");
  detect->add_option("--format", det.common.format, "Output format: json|csv")
      ->default_val("json");
  add_metric_flags(detect, det.common);

  SimulateOpts sim;
  auto* simulate =
      app.add_subcommand("simulate", "Run simulation benchmarks (CSV table)");
  simulate->add_option("--scenario", sim.scenarios,
                       "gaussian|distmeantail|heavytail (repeatable)");
  simulate->add_option("--T", sim.lengths, "Series length (repeatable)");
  simulate->add_option("--metric", sim.metrics,
                       "Divergence: energy|energy-complete|ks|ks-windowed"
                       " (repeatable)");
  simulate->add_option("--trials", sim.trials, "Trials per combination")
      ->default_val(100);
  simulate->add_option("--threads", sim.threads,
                       "Worker threads (0 = hardware)");
  add_metric_flags(simulate, sim.common, /*single_metric=*/false);

  PruneOpts pr;
  auto* prune = app.add_subcommand(
      "prune-stats", "Emit the |S_t(k)| candidate-count matrix as CSV");
  prune->add_option("--input", pr.input, "CSV input path");
  prune->add_option("--columns", pr.columns, "Column selection");
  prune->add_option("--transform", pr.transforms, "log|diff (repeatable)");
  prune->add_option("--scenario", pr.scenario,
                    "Generate input instead: gaussian|distmeantail|heavytail");
  prune->add_option("--T", pr.length, "Generated series length")
      ->default_val(400);
  add_metric_flags(prune, pr.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*detect) return run_detect(det);
    if (*simulate) return run_simulate(sim);
    if (*prune) return run_prune_stats(pr);
  } catch (const cp3o::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const cp3o::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitConfig;
}
