#include "sitegrid/report.hpp"

#include <algorithm>
#include <fstream>
#include <system_error>
#include <utility>

#include "json.hpp"
#include "sitegrid/csv.hpp"
#include "sitegrid/error.hpp"
#include "sitegrid/synth.hpp"

namespace sitegrid {
namespace {

using nlohmann::ordered_json;

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

ordered_json quadrants_json(const QuadrantShares& quadrants) {
  ordered_json out;
  out["x_split"] = quadrants.x_split;
  out["y_split"] = quadrants.y_split;
  out["count"] = quadrants.count;
  out["top_right"] = quadrants.top_right;
  out["top_left"] = quadrants.top_left;
  out["bottom_right"] = quadrants.bottom_right;
  out["bottom_left"] = quadrants.bottom_left;
  out["top_half"] = quadrants.top_half();
  out["right_half"] = quadrants.right_half();
  return out;
}

ordered_json equity_row_json(const EquityRow& row) {
  ordered_json out;
  out["group"] = row.group;
  out["attribute"] = attr_name(row.spec.attribute);
  out["side"] = row.spec.side == SplitSide::above ? "above" : "below";
  out["granularity"] = granularity_name(row.spec.granularity);
  out["group_size"] = row.group_size;
  out["split_median"] = row.split_median;
  out["group_mean_realized"] = row.group_mean_realized;
  out["group_mean_carbon_per_panel"] = row.group_mean_carbon_per_panel;
  out["national_mean_realized"] = row.national_mean_realized;
  out["national_mean_carbon_per_panel"] = row.national_mean_carbon_per_panel;
  out["realized_ratio"] = row.realized_ratio;
  out["carbon_ratio"] = row.carbon_ratio;
  out["realized_pct_diff"] = row.realized_pct_diff;
  out["carbon_pct_diff"] = row.carbon_pct_diff;
  return out;
}

struct Artifact {
  std::filesystem::path path;
  std::string content;
};

CommandResult write_all(const std::filesystem::path& out_dir,
                        std::vector<Artifact> artifacts) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::io_error, "cannot create output directory " +
                                         out_dir.string() + ": " +
                                         ec.message());
  }
  CommandResult result;
  for (auto& artifact : artifacts) {
    write_atomic(artifact.path, artifact.content);
    result.written.push_back(std::move(artifact.path));
  }
  return result;
}

Dataset load_workspace(const RunConfig& config) {
  return load_canonical(config.out_dir / "data_by_zip.csv",
                        config.out_dir / "data_by_state.csv");
}

std::vector<Artifact> canonical_artifacts(const RunConfig& config,
                                          const Dataset& dataset) {
  std::vector<Artifact> artifacts;
  artifacts.push_back(
      {config.out_dir / "data_by_zip.csv", data_by_zip_csv(dataset)});
  artifacts.push_back(
      {config.out_dir / "data_by_state.csv", data_by_state_csv(dataset)});
  artifacts.push_back(
      {config.out_dir / "provenance.json", provenance_json(dataset.provenance)});
  return artifacts;
}

}  // namespace

void write_atomic(const std::filesystem::path& path,
                  std::string_view content) {
  std::filesystem::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::io_error, "cannot open " + temp.string() +
                                           " for writing");
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignore;
      std::filesystem::remove(temp, ignore);
      throw Error(ErrorCode::io_error, "write failed for " + temp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::error_code ignore;
    std::filesystem::remove(temp, ignore);
    throw Error(ErrorCode::io_error, "cannot rename " + temp.string() +
                                         " to " + path.string() + ": " +
                                         ec.message());
  }
}

std::string metrics_by_zip_csv(const MetricsTable& metrics) {
  csv::Table table;
  table.header = {"zip_code", "energy_per_panel", "carbon_per_panel",
                  "realized_potential"};
  for (const auto& row : metrics.rows) {
    table.rows.push_back({row.zip_code, csv::format_double(row.energy_per_panel),
                          csv::format_double(row.carbon_per_panel),
                          csv::format_double(row.realized_potential)});
  }
  return csv::to_string(table);
}

std::string fits_json(const std::vector<FitResult>& fits) {
  ordered_json doc = ordered_json::array();
  for (const auto& fit : fits) {
    ordered_json entry;
    entry["quantile_index"] = fit.quantile_index;
    entry["n_points"] = fit.n_points;
    entry["coefficients"] = fit.coefficients;
    if (fit.pearson_r) {
      entry["pearson_r"] = *fit.pearson_r;
    } else {
      entry["pearson_r"] = nullptr;
    }
    entry["r_squared"] = fit.r_squared;
    doc.push_back(std::move(entry));
  }
  return dump(doc);
}

std::string equity_report_json(const EquityReport& report) {
  ordered_json doc;
  doc["weighting"] = weighting_name(report.weighting);
  doc["rows"] = ordered_json::array();
  for (const auto& row : report.rows) doc["rows"].push_back(equity_row_json(row));
  return dump(doc);
}

std::string equity_bars_csv(const EquityReport& report) {
  csv::Table table;
  table.header = {"group", "metric", "percent_diff"};
  for (const auto& row : report.rows) {
    table.rows.push_back({row.group, "carbon_per_panel",
                          csv::format_double(row.carbon_pct_diff)});
    table.rows.push_back({row.group, "realized_potential",
                          csv::format_double(row.realized_pct_diff)});
  }
  return csv::to_string(table);
}

std::string projection_csv(const ProjectionResult& result,
                           ImpactMetric metric) {
  csv::Table table;
  table.header = {"strategy", "n", "value"};
  for (const auto& curve : result.curves) {
    for (const auto& point : curve.points) {
      double value = metric == ImpactMetric::energy ? point.energy_added
                                                    : point.carbon_added;
      table.rows.push_back({curve.strategy, csv::format_int(point.budget),
                            csv::format_double(value)});
    }
  }
  return csv::to_string(table);
}

std::string markers_json(const ProjectionResult& result,
                         const std::vector<double>& multipliers) {
  ordered_json doc = ordered_json::array();
  for (std::size_t i = 0; i < result.markers.size(); ++i) {
    ordered_json entry;
    entry["multiplier"] = i < multipliers.size() ? multipliers[i] : 0.0;
    entry["budget"] = result.markers[i];
    doc.push_back(std::move(entry));
  }
  return dump(doc);
}

std::string placements_csv(const PlacementPlan& plan) {
  csv::Table table;
  table.header = {"zip_code", "panels_added"};
  for (const auto& [zip_code, panels] : plan.placements) {
    table.rows.push_back({zip_code, csv::format_int(panels)});
  }
  return csv::to_string(table);
}

std::string analysis_summary_json(const AnalysisSummary& summary) {
  ordered_json doc;
  doc["zip_count"] = summary.zip_count;
  doc["per_panel_count"] = summary.per_panel_count;
  doc["excluded_zero_potential"] = summary.excluded_zero_potential;
  doc["cov_energy_per_panel"] = summary.cov_energy_per_panel;
  doc["cov_carbon_per_panel"] = summary.cov_carbon_per_panel;
  doc["pearson_energy_carbon"] = summary.pearson_energy_carbon;
  doc["quadrants"] = quadrants_json(summary.quadrants);
  return dump(doc);
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows,
                           std::string_view baseline, std::int64_t budget) {
  csv::Table table;
  table.header = {"strategy", "baseline", "n", "energy_percent_of_baseline",
                  "carbon_percent_of_baseline"};
  for (const auto& row : rows) {
    table.rows.push_back({row.strategy, std::string(baseline),
                          csv::format_int(budget),
                          csv::format_double(row.energy_percent_of_baseline),
                          csv::format_double(row.carbon_percent_of_baseline)});
  }
  return csv::to_string(table);
}

std::string crossover_csv(const std::vector<CrossoverRow>& rows,
                          std::string_view baseline, double reference_budget) {
  csv::Table table;
  table.header = {"strategy",        "baseline",
                  "reference_budget", "target_carbon_added",
                  "reached",          "crossover_budget",
                  "percent_of_reference"};
  for (const auto& row : rows) {
    table.rows.push_back(
        {row.strategy, std::string(baseline),
         csv::format_double(reference_budget), csv::format_double(row.target),
         row.reached ? "true" : "false",
         row.reached ? csv::format_double(row.budget) : "",
         row.reached ? csv::format_double(row.percent_of_reference) : ""});
  }
  return csv::to_string(table);
}

CommandResult cmd_ingest(const RunConfig& config) {
  if (config.sunroof_csv.empty() || config.acs_csv.empty()) {
    throw Error(ErrorCode::invalid_config,
                "ingest needs both sunroof and acs input paths");
  }
  auto sunroof_rows = parse_zip_csv(config.sunroof_csv, config.sunroof_schema);
  auto acs_rows = parse_zip_csv(config.acs_csv, config.acs_schema);
  Dataset dataset = clean_join(sunroof_rows, acs_rows, config.clean);
  dataset.provenance.sunroof.path = config.sunroof_csv.string();
  dataset.provenance.acs.path = config.acs_csv.string();

  std::vector<VotingRow> voting;
  if (config.voting_csv) {
    voting = parse_voting_csv(*config.voting_csv, config.voting_schema);
    SourceInfo info;
    info.path = config.voting_csv->string();
    info.rows_parsed = voting.size();
    dataset.provenance.voting = info;
  }
  std::vector<EnergyMixRow> energy_mix;
  if (config.energy_mix_csv) {
    energy_mix =
        parse_energy_mix_csv(*config.energy_mix_csv, config.energy_mix_schema);
    SourceInfo info;
    info.path = config.energy_mix_csv->string();
    info.rows_parsed = energy_mix.size();
    dataset.provenance.energy_mix = info;
  }
  dataset = aggregate_states(std::move(dataset), voting, energy_mix);

  return write_all(config.out_dir, canonical_artifacts(config, dataset));
}

CommandResult cmd_analyze(const RunConfig& config) {
  Dataset dataset = load_workspace(config);
  MetricsTable metrics = per_zip_metrics(dataset);

  std::vector<double> energy;
  std::vector<double> carbon;
  energy.reserve(metrics.rows.size());
  carbon.reserve(metrics.rows.size());
  for (const auto& row : metrics.rows) {
    energy.push_back(row.energy_per_panel);
    carbon.push_back(row.carbon_per_panel);
  }

  AnalysisSummary summary;
  summary.zip_count = dataset.zips.size();
  summary.per_panel_count = metrics.rows.size();
  summary.excluded_zero_potential = metrics.excluded;
  summary.cov_energy_per_panel = coefficient_of_variation(energy);
  summary.cov_carbon_per_panel = coefficient_of_variation(carbon);
  summary.pearson_energy_carbon = pearson(energy, carbon);
  summary.quadrants = quadrant_shares(dataset, config.quadrant_rule);

  std::vector<FitResult> fits =
      quantile_fits(dataset, config.quantile_key, config.fit_x, config.fit_y,
                    config.quantile_count, config.fit_degree);
  EquityReport equity =
      equity_report(dataset, config.splits, nullptr, config.weighting);

  std::vector<Artifact> artifacts;
  artifacts.push_back(
      {config.out_dir / "metrics_by_zip.csv", metrics_by_zip_csv(metrics)});
  artifacts.push_back({config.out_dir / "analysis_summary.json",
                       analysis_summary_json(summary)});
  artifacts.push_back({config.out_dir / "fits.json", fits_json(fits)});
  artifacts.push_back(
      {config.out_dir / "equity_report.json", equity_report_json(equity)});
  artifacts.push_back(
      {config.out_dir / "equity_bars.csv", equity_bars_csv(equity)});
  return write_all(config.out_dir, std::move(artifacts));
}

CommandResult cmd_project(const RunConfig& config) {
  Dataset dataset = load_workspace(config);

  ProjectionConfig projection_config;
  projection_config.n_grid = config.n_grid;
  projection_config.strategies = config.strategies;
  projection_config.scenario_multipliers = config.scenario_multipliers;
  ProjectionResult result =
      run_projection(dataset, projection_config, config.parallel_projection);

  const std::int64_t max_budget = config.n_grid.back();
  const ProjectionCurve* baseline = nullptr;
  for (const auto& curve : result.curves) {
    if (curve.strategy == config.baseline) baseline = &curve;
  }
  if (baseline == nullptr) {
    throw Error(ErrorCode::unknown_strategy,
                "baseline strategy '" + config.baseline +
                    "' is not in the roster");
  }

  std::vector<ComparisonRow> comparisons;
  std::vector<CrossoverRow> crossovers;
  // markers may exceed the grid; comparisons happen where curves exist
  double reference_budget =
      result.markers.empty() ? static_cast<double>(max_budget)
                             : std::min(result.markers.back(),
                                        static_cast<double>(max_budget));
  if (max_budget > 0) {
    double target = value_at(*baseline, ImpactMetric::carbon, reference_budget);
    for (const auto& curve : result.curves) {
      if (curve.strategy == config.baseline) continue;
      ComparisonRow comparison;
      comparison.strategy = curve.strategy;
      comparison.energy_percent_of_baseline =
          percent_of(curve, *baseline, ImpactMetric::energy, max_budget);
      comparison.carbon_percent_of_baseline =
          percent_of(curve, *baseline, ImpactMetric::carbon, max_budget);
      comparisons.push_back(std::move(comparison));

      CrossoverRow crossover;
      crossover.strategy = curve.strategy;
      crossover.target = target;
      if (auto budget =
              crossover_budget(curve, target, ImpactMetric::carbon)) {
        crossover.reached = true;
        crossover.budget = *budget;
        crossover.percent_of_reference =
            reference_budget > 0.0 ? 100.0 * *budget / reference_budget
                                   : 100.0;
      }
      crossovers.push_back(std::move(crossover));
    }
  }

  const StrategySpec& post_spec =
      find_strategy(config.strategies, config.post_equity_strategy);
  PlacementPlan post_plan = run_strategy(dataset, post_spec, max_budget);
  EquityReport post_equity =
      equity_report(dataset, config.splits, &post_plan, config.weighting);

  std::vector<Artifact> artifacts;
  artifacts.push_back({config.out_dir / "projection_energy.csv",
                       projection_csv(result, ImpactMetric::energy)});
  artifacts.push_back({config.out_dir / "projection_carbon.csv",
                       projection_csv(result, ImpactMetric::carbon)});
  artifacts.push_back({config.out_dir / "markers.json",
                       markers_json(result, config.scenario_multipliers)});
  for (const auto& spec : config.strategies) {
    PlacementPlan plan = run_strategy(dataset, spec, max_budget);
    artifacts.push_back(
        {config.out_dir / ("placements_" + spec.name + "_" +
                           csv::format_int(max_budget) + ".csv"),
         placements_csv(plan)});
  }
  artifacts.push_back(
      {config.out_dir / "comparison.csv",
       comparison_csv(comparisons, config.baseline, max_budget)});
  artifacts.push_back(
      {config.out_dir / "crossover.csv",
       crossover_csv(crossovers, config.baseline, reference_budget)});
  artifacts.push_back({config.out_dir / "post_equity_report.json",
                       equity_report_json(post_equity)});
  artifacts.push_back({config.out_dir / "post_equity_bars.csv",
                       equity_bars_csv(post_equity)});
  return write_all(config.out_dir, std::move(artifacts));
}

CommandResult cmd_synth(const RunConfig& config) {
  Dataset dataset = synth_dataset(config.seed, config.synth);
  return write_all(config.out_dir, canonical_artifacts(config, dataset));
}

}  // namespace sitegrid
