#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sitegrid/attributes.hpp"
#include "sitegrid/types.hpp"

namespace sitegrid {

enum class SortDirection { descending, ascending };

/// Total order over ZIPs: by one attribute, then zip_code ascending.
/// ZIPs whose attribute is absent rank after every ZIP that has one.
struct OrderingSpec {
  Attr attribute = Attr::carbon_per_panel;
  SortDirection direction = SortDirection::descending;

  bool operator==(const OrderingSpec&) const = default;
};

/// Panels added per ZIP by one strategy at one budget.
struct PlacementPlan {
  std::string strategy;
  std::int64_t budget = 0;
  std::map<std::string, std::int64_t> placements;  // zip_code -> panels, > 0
  std::int64_t total_placed = 0;
  bool saturated = false;  // budget exceeded total remaining capacity

  bool operator==(const PlacementPlan&) const = default;
};

/// floor(potential - existing), floored again at 0.
std::int64_t remaining_capacity(const ZipRecord& zip);
std::int64_t total_remaining_capacity(const Dataset& dataset);

/// Fill ZIPs to capacity in the given order until the budget runs out;
/// the last ZIP touched may be partially filled.
PlacementPlan greedy_alloc(const Dataset& dataset, const OrderingSpec& ordering,
                           std::int64_t budget);

/// Largest-remainder apportionment proportional to existing installs.
/// Allocations above a ZIP's remaining capacity are capped and the
/// overflow re-apportioned over uncapped ZIPs until none remains. Throws
/// Error{undefined_distribution} when every ZIP has zero existing installs.
PlacementPlan status_quo_alloc(const Dataset& dataset, std::int64_t budget);

/// Cycle through the orderings; each turn takes that list's best ZIP not
/// yet claimed by any list and with capacity left, and fills it whole (or
/// partially to exhaust the budget exactly).
PlacementPlan round_robin_alloc(const Dataset& dataset,
                                const std::vector<OrderingSpec>& orderings,
                                std::int64_t budget);

/// The four default round-robin lists: energy per panel desc, carbon per
/// panel desc, Black population share desc, median income asc.
std::vector<OrderingSpec> default_round_robin_orderings();

/// Score each ZIP by a weighted sum of min-max-normalized attributes
/// (ascending attributes are negated before normalizing; ZIPs missing an
/// attribute contribute 0 for it), then run greedy_alloc on score
/// descending. Throws Error{invalid_argument} when no weight is nonzero.
struct WeightedTerm {
  Attr attribute = Attr::carbon_per_panel;
  SortDirection direction = SortDirection::descending;
  double weight = 1.0;

  bool operator==(const WeightedTerm&) const = default;
};

PlacementPlan weighted_alloc(const Dataset& dataset,
                             const std::vector<WeightedTerm>& terms,
                             std::int64_t budget);

struct PlanImpacts {
  double energy_added = 0.0;  // kWh/yr
  double carbon_added = 0.0;  // kg/yr

  bool operator==(const PlanImpacts&) const = default;
};

/// Σ placements[z] × per-panel value of z. Throws Error{unknown_zip} when
/// the plan names a ZIP absent from the dataset, Error{capacity_exceeded}
/// when a placement overshoots the ZIP's remaining capacity.
PlanImpacts plan_impacts(const Dataset& dataset, const PlacementPlan& plan);

/// One named, parameterized strategy: the roster unit used by projection
/// and the CLI.
struct StrategySpec {
  enum class Kind { status_quo, greedy, round_robin, weighted };

  std::string name;
  Kind kind = Kind::greedy;
  OrderingSpec ordering;                  // greedy
  std::vector<OrderingSpec> orderings;    // round_robin
  std::vector<WeightedTerm> terms;        // weighted
};

PlacementPlan run_strategy(const Dataset& dataset, const StrategySpec& spec,
                           std::int64_t budget);

/// Built-in roster: status_quo, energy_greedy, carbon_greedy, equity_black,
/// equity_income, round_robin.
std::vector<StrategySpec> default_strategies();

/// Look up roster entries by name. Throws Error{unknown_strategy}.
const StrategySpec& find_strategy(const std::vector<StrategySpec>& roster,
                                  std::string_view name);

}  // namespace sitegrid
