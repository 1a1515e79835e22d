#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sitegrid/strategies.hpp"
#include "sitegrid/types.hpp"

namespace sitegrid {

enum class ImpactMetric { energy, carbon };

ImpactMetric impact_metric_from_name(std::string_view name);
std::string_view impact_metric_name(ImpactMetric metric);

struct ProjectionConfig {
  std::vector<std::int64_t> n_grid;       // strictly increasing, starts at 0
  std::vector<StrategySpec> strategies;
  std::vector<double> scenario_multipliers = {2.0, 3.0, 4.0};
};

/// {0, 1e5, 2e5, ..., 1.8e6}: nineteen budgets.
std::vector<std::int64_t> default_n_grid();

struct ProjectionPoint {
  std::int64_t budget = 0;
  double energy_added = 0.0;  // kWh/yr
  double carbon_added = 0.0;  // kg/yr
  bool saturated = false;
};

struct ProjectionCurve {
  std::string strategy;
  std::vector<ProjectionPoint> points;  // one per grid budget, grid order
};

struct ProjectionResult {
  std::vector<ProjectionCurve> curves;   // config order
  std::vector<double> markers;           // scenario budgets, config order
};

/// Run every strategy at every grid budget; each cell is a fresh
/// allocation on the untouched dataset. With parallel set the cells are
/// computed on multiple threads; results are bit-identical either way.
/// Throws Error{invalid_config} when the grid is empty, unsorted or does
/// not start at 0.
ProjectionResult run_projection(const Dataset& dataset,
                                const ProjectionConfig& config,
                                bool parallel = false);

/// 100 x a's metric / b's metric at grid budget N. Throws
/// Error{invalid_argument} when either curve lacks N and
/// Error{undefined_statistic} when b's metric is 0 there.
double percent_of(const ProjectionCurve& a, const ProjectionCurve& b,
                  ImpactMetric metric, std::int64_t budget);

/// Piecewise-linear value of the curve's metric at any budget within the
/// grid range. Throws Error{invalid_argument} outside the range.
double value_at(const ProjectionCurve& curve, ImpactMetric metric,
                double budget);

/// Smallest budget (linearly interpolated between grid points) where the
/// metric reaches the target; nullopt when the curve never gets there.
std::optional<double> crossover_budget(const ProjectionCurve& curve,
                                       double target, ImpactMetric metric);

/// Panels added to reach each multiple of the existing stock:
/// (multiplier - 1) x total existing installs.
std::vector<double> scenario_markers(const Dataset& dataset,
                                     const std::vector<double>& multipliers);

}  // namespace sitegrid
