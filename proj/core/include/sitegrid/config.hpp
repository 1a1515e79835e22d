#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sitegrid/dataset.hpp"
#include "sitegrid/equity.hpp"
#include "sitegrid/metrics.hpp"
#include "sitegrid/projection.hpp"
#include "sitegrid/strategies.hpp"
#include "sitegrid/synth.hpp"

namespace sitegrid {

/// Everything a command run needs: input locations and column mappings,
/// analysis options, the strategy roster, the projection grid, output
/// directory and seed. Defaults reproduce the reference analysis.
struct RunConfig {
  // ingest inputs
  std::filesystem::path sunroof_csv;
  std::filesystem::path acs_csv;
  std::optional<std::filesystem::path> voting_csv;
  std::optional<std::filesystem::path> energy_mix_csv;
  SchemaMap sunroof_schema = sunroof_schema_canonical();
  SchemaMap acs_schema = acs_schema_canonical();
  VotingSchema voting_schema;
  EnergyMixSchema energy_mix_schema;
  CleanOptions clean;

  // analysis
  Granularity granularity = Granularity::zip;
  Weighting weighting = Weighting::unit;
  SplitRule quadrant_rule = SplitRule::mean;
  std::size_t quantile_count = 4;
  std::size_t fit_degree = 2;
  Attr quantile_key = Attr::carbon_offset_total;
  Attr fit_x = Attr::carbon_offset_total;
  Attr fit_y = Attr::existing_installs;
  std::vector<SplitSpec> splits = default_split_specs();

  // strategies and projection
  std::vector<StrategySpec> strategies = default_strategies();
  std::vector<std::int64_t> n_grid = default_n_grid();
  std::vector<double> scenario_multipliers = {2.0, 3.0, 4.0};
  std::string baseline = "status_quo";
  std::string post_equity_strategy = "round_robin";
  bool parallel_projection = false;

  // synth
  SynthOptions synth;

  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
};

/// Parse "start:step:end" into an inclusive budget grid. Throws
/// Error{invalid_argument} on malformed text, step <= 0 or end < start.
std::vector<std::int64_t> parse_grid(std::string_view text);

/// Parse the JSON configuration. Unknown keys are rejected so typos fail
/// loudly; relative input paths resolve against base_dir. Throws
/// Error{invalid_config}.
RunConfig parse_run_config(const std::string& json_text,
                           const std::filesystem::path& base_dir);

RunConfig load_run_config(const std::filesystem::path& path);

/// Enforce cross-field invariants: quantile_count >= 2, fit_degree >= 1,
/// nonempty strategy roster with unique names, valid grid, distinct input
/// paths. Throws Error{invalid_config}.
void validate_config(const RunConfig& config);

}  // namespace sitegrid
