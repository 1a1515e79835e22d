#include "sitegrid/projection.hpp"

#include <algorithm>
#include <future>

#include "sitegrid/error.hpp"

namespace sitegrid {
namespace {

void validate_grid(const std::vector<std::int64_t>& grid) {
  if (grid.empty()) {
    throw Error(ErrorCode::invalid_config, "budget grid is empty");
  }
  if (grid.front() != 0) {
    throw Error(ErrorCode::invalid_config, "budget grid must start at 0");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) {
      throw Error(ErrorCode::invalid_config,
                  "budget grid must be strictly increasing");
    }
  }
}

ProjectionCurve curve_for(const Dataset& dataset, const StrategySpec& spec,
                          const std::vector<std::int64_t>& grid) {
  ProjectionCurve curve;
  curve.strategy = spec.name;
  curve.points.reserve(grid.size());
  for (std::int64_t budget : grid) {
    PlacementPlan plan = run_strategy(dataset, spec, budget);
    PlanImpacts impacts = plan_impacts(dataset, plan);
    curve.points.push_back(
        {budget, impacts.energy_added, impacts.carbon_added, plan.saturated});
  }
  return curve;
}

double point_metric(const ProjectionPoint& point, ImpactMetric metric) {
  return metric == ImpactMetric::energy ? point.energy_added
                                        : point.carbon_added;
}

}  // namespace

ImpactMetric impact_metric_from_name(std::string_view name) {
  if (name == "energy") return ImpactMetric::energy;
  if (name == "carbon") return ImpactMetric::carbon;
  throw Error(ErrorCode::invalid_argument,
              "unknown impact metric: " + std::string(name));
}

std::string_view impact_metric_name(ImpactMetric metric) {
  return metric == ImpactMetric::energy ? "energy" : "carbon";
}

std::vector<std::int64_t> default_n_grid() {
  std::vector<std::int64_t> grid;
  for (std::int64_t budget = 0; budget <= 1'800'000; budget += 100'000) {
    grid.push_back(budget);
  }
  return grid;
}

ProjectionResult run_projection(const Dataset& dataset,
                                const ProjectionConfig& config,
                                bool parallel) {
  validate_grid(config.n_grid);

  ProjectionResult result;
  result.markers = scenario_markers(dataset, config.scenario_multipliers);
  result.curves.resize(config.strategies.size());

  if (parallel) {
    std::vector<std::future<ProjectionCurve>> futures;
    futures.reserve(config.strategies.size());
    for (const auto& spec : config.strategies) {
      futures.push_back(std::async(std::launch::async, [&dataset, &spec,
                                                        &config] {
        return curve_for(dataset, spec, config.n_grid);
      }));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) {
      result.curves[i] = futures[i].get();
    }
  } else {
    for (std::size_t i = 0; i < config.strategies.size(); ++i) {
      result.curves[i] = curve_for(dataset, config.strategies[i],
                                   config.n_grid);
    }
  }
  return result;
}

namespace {

const ProjectionPoint& point_at(const ProjectionCurve& curve,
                                std::int64_t budget) {
  for (const auto& point : curve.points) {
    if (point.budget == budget) return point;
  }
  throw Error(ErrorCode::invalid_argument,
              "curve " + curve.strategy + " has no budget " +
                  std::to_string(budget));
}

}  // namespace

double percent_of(const ProjectionCurve& a, const ProjectionCurve& b,
                  ImpactMetric metric, std::int64_t budget) {
  double numerator = point_metric(point_at(a, budget), metric);
  double denominator = point_metric(point_at(b, budget), metric);
  if (denominator == 0.0) {
    throw Error(ErrorCode::undefined_statistic,
                "curve " + b.strategy + " has zero " +
                    std::string(impact_metric_name(metric)) + " at budget " +
                    std::to_string(budget));
  }
  return 100.0 * numerator / denominator;
}

double value_at(const ProjectionCurve& curve, ImpactMetric metric,
                double budget) {
  if (curve.points.empty() ||
      budget < static_cast<double>(curve.points.front().budget) ||
      budget > static_cast<double>(curve.points.back().budget)) {
    throw Error(ErrorCode::invalid_argument,
                "budget " + std::to_string(budget) +
                    " lies outside the projection grid");
  }
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    double b = static_cast<double>(curve.points[i].budget);
    if (budget == b) return point_metric(curve.points[i], metric);
    if (budget < b) {
      double b0 = static_cast<double>(curve.points[i - 1].budget);
      double v0 = point_metric(curve.points[i - 1], metric);
      double v1 = point_metric(curve.points[i], metric);
      return v0 + (v1 - v0) * (budget - b0) / (b - b0);
    }
  }
  return point_metric(curve.points.back(), metric);
}

std::optional<double> crossover_budget(const ProjectionCurve& curve,
                                       double target, ImpactMetric metric) {
  if (curve.points.empty()) return std::nullopt;
  if (point_metric(curve.points.front(), metric) >= target) {
    return static_cast<double>(curve.points.front().budget);
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    double value = point_metric(curve.points[i], metric);
    if (value < target) continue;
    double prev = point_metric(curve.points[i - 1], metric);
    double b0 = static_cast<double>(curve.points[i - 1].budget);
    double b1 = static_cast<double>(curve.points[i].budget);
    return b0 + (target - prev) * (b1 - b0) / (value - prev);
  }
  return std::nullopt;
}

std::vector<double> scenario_markers(const Dataset& dataset,
                                     const std::vector<double>& multipliers) {
  double existing = dataset.total_existing_installs();
  std::vector<double> markers;
  markers.reserve(multipliers.size());
  for (double multiplier : multipliers) {
    markers.push_back((multiplier - 1.0) * existing);
  }
  return markers;
}

}  // namespace sitegrid
