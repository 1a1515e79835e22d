#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sitegrid/config.hpp"
#include "sitegrid/equity.hpp"
#include "sitegrid/metrics.hpp"
#include "sitegrid/projection.hpp"

namespace sitegrid {

/// Write content to path via a sibling temp file and rename, so a failed
/// run never leaves a partial file. Throws Error{io_error}.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// Plot-ready serializations. All CSVs are RFC 4180 with CRLF line ends;
// all JSON uses stable (insertion-ordered) keys.
std::string metrics_by_zip_csv(const MetricsTable& metrics);
std::string fits_json(const std::vector<FitResult>& fits);
std::string equity_report_json(const EquityReport& report);
std::string equity_bars_csv(const EquityReport& report);
std::string projection_csv(const ProjectionResult& result, ImpactMetric metric);
std::string markers_json(const ProjectionResult& result,
                         const std::vector<double>& multipliers);
std::string placements_csv(const PlacementPlan& plan);

struct AnalysisSummary {
  std::size_t zip_count = 0;
  std::size_t per_panel_count = 0;  // ZIPs entering per-panel analyses
  std::size_t excluded_zero_potential = 0;
  double cov_energy_per_panel = 0.0;
  double cov_carbon_per_panel = 0.0;
  double pearson_energy_carbon = 0.0;
  QuadrantShares quadrants;
};

std::string analysis_summary_json(const AnalysisSummary& summary);

struct ComparisonRow {
  std::string strategy;
  double energy_percent_of_baseline = 0.0;
  double carbon_percent_of_baseline = 0.0;
};

/// percent_of the baseline at the grid's final budget, one row per
/// non-baseline strategy in roster order.
std::string comparison_csv(const std::vector<ComparisonRow>& rows,
                           std::string_view baseline, std::int64_t budget);

struct CrossoverRow {
  std::string strategy;
  double target = 0.0;            // baseline carbon at the reference budget
  bool reached = false;
  double budget = 0.0;            // interpolated, when reached
  double percent_of_reference = 0.0;
};

/// Budget each strategy needs to match the baseline's carbon offset at
/// the reference budget (the last scenario marker).
std::string crossover_csv(const std::vector<CrossoverRow>& rows,
                          std::string_view baseline, double reference_budget);

/// Command drivers behind the CLI: compute everything, then write each
/// artifact atomically into config.out_dir. They throw Error on any
/// failure before writing anything.
struct CommandResult {
  std::vector<std::filesystem::path> written;
};

CommandResult cmd_ingest(const RunConfig& config);
CommandResult cmd_analyze(const RunConfig& config);
CommandResult cmd_project(const RunConfig& config);
CommandResult cmd_synth(const RunConfig& config);

}  // namespace sitegrid
