#include "sitegrid/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>

#include "sitegrid/error.hpp"

namespace sitegrid {
namespace {

void check_budget(std::int64_t budget) {
  if (budget < 0) {
    throw Error(ErrorCode::invalid_argument, "budget must be nonnegative");
  }
}

/// Indices of dataset.zips ranked by the ordering: attribute direction
/// first, zip_code ascending on ties, attribute-missing ZIPs last.
std::vector<std::size_t> ranked_indices(const Dataset& dataset,
                                        const OrderingSpec& ordering) {
  std::vector<std::optional<double>> keys(dataset.zips.size());
  for (std::size_t i = 0; i < dataset.zips.size(); ++i) {
    keys[i] = zip_attr(dataset, dataset.zips[i], ordering.attribute);
  }
  std::vector<std::size_t> order(dataset.zips.size());
  std::iota(order.begin(), order.end(), 0);
  bool ascending = ordering.direction == SortDirection::ascending;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) {
              bool a_has = keys[a].has_value();
              bool b_has = keys[b].has_value();
              if (a_has != b_has) return a_has;
              if (a_has && *keys[a] != *keys[b]) {
                return ascending ? *keys[a] < *keys[b] : *keys[a] > *keys[b];
              }
              return dataset.zips[a].zip_code < dataset.zips[b].zip_code;
            });
  return order;
}

/// Walk ZIPs in rank order, filling each to capacity; the last ZIP
/// touched may be partial so the total lands exactly on the budget.
PlacementPlan greedy_fill(const Dataset& dataset,
                          const std::vector<std::size_t>& order,
                          std::int64_t budget) {
  PlacementPlan plan;
  plan.budget = budget;
  std::int64_t left = budget;
  for (std::size_t index : order) {
    if (left == 0) break;
    const ZipRecord& zip = dataset.zips[index];
    std::int64_t take = std::min(remaining_capacity(zip), left);
    if (take <= 0) continue;
    plan.placements[zip.zip_code] = take;
    plan.total_placed += take;
    left -= take;
  }
  plan.saturated = left > 0;
  return plan;
}

}  // namespace

std::int64_t remaining_capacity(const ZipRecord& zip) {
  double spare = zip.potential_installs - zip.existing_installs;
  if (spare <= 0.0) return 0;
  return static_cast<std::int64_t>(std::floor(spare));
}

std::int64_t total_remaining_capacity(const Dataset& dataset) {
  std::int64_t total = 0;
  for (const auto& zip : dataset.zips) total += remaining_capacity(zip);
  return total;
}

PlacementPlan greedy_alloc(const Dataset& dataset,
                           const OrderingSpec& ordering, std::int64_t budget) {
  check_budget(budget);
  PlacementPlan plan =
      greedy_fill(dataset, ranked_indices(dataset, ordering), budget);
  plan.strategy = "greedy";
  return plan;
}

PlacementPlan status_quo_alloc(const Dataset& dataset, std::int64_t budget) {
  check_budget(budget);
  double total_weight = 0.0;
  for (const auto& zip : dataset.zips) total_weight += zip.existing_installs;
  if (!(total_weight > 0.0)) {
    throw Error(ErrorCode::undefined_distribution,
                "status quo undefined: no existing installs anywhere");
  }

  PlacementPlan plan;
  plan.strategy = "status_quo";
  plan.budget = budget;

  std::vector<std::int64_t> caps(dataset.zips.size());
  for (std::size_t i = 0; i < dataset.zips.size(); ++i) {
    caps[i] = remaining_capacity(dataset.zips[i]);
  }
  std::vector<std::int64_t> alloc(dataset.zips.size(), 0);
  std::int64_t left = budget;

  while (left > 0) {
    std::vector<std::size_t> active;
    double active_weight = 0.0;
    for (std::size_t i = 0; i < dataset.zips.size(); ++i) {
      if (caps[i] > 0 && dataset.zips[i].existing_installs > 0.0) {
        active.push_back(i);
        active_weight += dataset.zips[i].existing_installs;
      }
    }

    if (active.empty()) {
      // Only zero-weight ZIPs can still absorb panels; fill them in
      // zip_code order so conservation still holds.
      for (std::size_t i = 0; i < dataset.zips.size() && left > 0; ++i) {
        std::int64_t take = std::min(caps[i], left);
        if (take <= 0) continue;
        alloc[i] += take;
        caps[i] -= take;
        left -= take;
      }
      break;
    }

    // Largest-remainder apportionment of the outstanding budget over the
    // active set; capacity caps generate overflow for the next round.
    struct Share {
      std::size_t index;
      std::int64_t target;
      double remainder;
    };
    std::vector<Share> shares;
    shares.reserve(active.size());
    std::int64_t floor_sum = 0;
    for (std::size_t i : active) {
      double quota = static_cast<double>(left) *
                     dataset.zips[i].existing_installs / active_weight;
      auto base = static_cast<std::int64_t>(std::floor(quota));
      shares.push_back({i, base, quota - std::floor(quota)});
      floor_sum += base;
    }
    std::int64_t bonus = left - floor_sum;
    std::sort(shares.begin(), shares.end(),
              [&](const Share& a, const Share& b) {
                if (a.remainder != b.remainder) {
                  return a.remainder > b.remainder;
                }
                return dataset.zips[a.index].zip_code <
                       dataset.zips[b.index].zip_code;
              });
    for (std::int64_t b = 0; b < bonus && b < std::ssize(shares); ++b) {
      ++shares[static_cast<std::size_t>(b)].target;
    }

    std::int64_t granted = 0;
    for (const Share& share : shares) {
      std::int64_t take = std::min(share.target, caps[share.index]);
      if (take <= 0) continue;
      alloc[share.index] += take;
      caps[share.index] -= take;
      granted += take;
    }
    left -= granted;
    if (granted == 0) break;  // every active ZIP saturated mid-round
  }

  for (std::size_t i = 0; i < dataset.zips.size(); ++i) {
    if (alloc[i] > 0) {
      plan.placements[dataset.zips[i].zip_code] = alloc[i];
      plan.total_placed += alloc[i];
    }
  }
  plan.saturated = plan.total_placed < budget;
  return plan;
}

PlacementPlan round_robin_alloc(const Dataset& dataset,
                                const std::vector<OrderingSpec>& orderings,
                                std::int64_t budget) {
  check_budget(budget);
  if (orderings.empty()) {
    throw Error(ErrorCode::invalid_argument,
                "round robin needs at least one ordering");
  }

  std::vector<std::vector<std::size_t>> lists;
  lists.reserve(orderings.size());
  for (const auto& ordering : orderings) {
    lists.push_back(ranked_indices(dataset, ordering));
  }
  std::vector<std::size_t> cursors(lists.size(), 0);
  std::vector<bool> taken(dataset.zips.size(), false);

  PlacementPlan plan;
  plan.strategy = "round_robin";
  plan.budget = budget;
  std::int64_t left = budget;

  for (std::size_t turn = 0; left > 0; turn = (turn + 1) % lists.size()) {
    auto& cursor = cursors[turn];
    const auto& list = lists[turn];
    while (cursor < list.size() &&
           (taken[list[cursor]] ||
            remaining_capacity(dataset.zips[list[cursor]]) == 0)) {
      ++cursor;
    }
    if (cursor == list.size()) {
      // Every list ranks all ZIPs, so one exhausted list means no ZIP
      // with capacity remains anywhere.
      break;
    }
    std::size_t index = list[cursor++];
    taken[index] = true;
    const ZipRecord& zip = dataset.zips[index];
    std::int64_t take = std::min(remaining_capacity(zip), left);
    plan.placements[zip.zip_code] = take;
    plan.total_placed += take;
    left -= take;
  }
  plan.saturated = left > 0;
  return plan;
}

std::vector<OrderingSpec> default_round_robin_orderings() {
  return {
      {Attr::energy_per_panel, SortDirection::descending},
      {Attr::carbon_per_panel, SortDirection::descending},
      {Attr::race_share_black, SortDirection::descending},
      {Attr::median_income, SortDirection::ascending},
  };
}

PlacementPlan weighted_alloc(const Dataset& dataset,
                             const std::vector<WeightedTerm>& terms,
                             std::int64_t budget) {
  check_budget(budget);
  bool any_nonzero = std::any_of(terms.begin(), terms.end(),
                                 [](const WeightedTerm& term) {
                                   return term.weight != 0.0;
                                 });
  if (!any_nonzero) {
    throw Error(ErrorCode::invalid_argument,
                "weighted allocation needs a nonzero weight");
  }

  std::vector<double> scores(dataset.zips.size(), 0.0);
  for (const auto& term : terms) {
    if (term.weight == 0.0) continue;
    std::vector<std::optional<double>> values(dataset.zips.size());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dataset.zips.size(); ++i) {
      auto value = zip_attr(dataset, dataset.zips[i], term.attribute);
      if (value && term.direction == SortDirection::ascending) {
        value = -*value;
      }
      values[i] = value;
      if (value) {
        lo = std::min(lo, *value);
        hi = std::max(hi, *value);
      }
    }
    if (!(hi > lo)) continue;  // constant or absent attribute scores 0
    for (std::size_t i = 0; i < dataset.zips.size(); ++i) {
      if (values[i]) {
        scores[i] += term.weight * (*values[i] - lo) / (hi - lo);
      }
    }
  }

  std::vector<std::size_t> order(dataset.zips.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return dataset.zips[a].zip_code < dataset.zips[b].zip_code;
  });

  PlacementPlan plan = greedy_fill(dataset, order, budget);
  plan.strategy = "weighted";
  return plan;
}

PlanImpacts plan_impacts(const Dataset& dataset, const PlacementPlan& plan) {
  PlanImpacts impacts;
  for (const auto& [zip_code, panels] : plan.placements) {
    if (panels < 0) {
      throw Error(ErrorCode::invalid_argument,
                  "negative placement for zip " + zip_code);
    }
    if (panels == 0) continue;
    const ZipRecord* zip = dataset.find_zip(zip_code);
    if (!zip) {
      throw Error(ErrorCode::unknown_zip,
                  "plan references unknown zip " + zip_code);
    }
    if (panels > remaining_capacity(*zip)) {
      throw Error(ErrorCode::capacity_exceeded,
                  "plan places " + std::to_string(panels) + " panels in zip " +
                      zip_code + " with capacity " +
                      std::to_string(remaining_capacity(*zip)));
    }
    double count = static_cast<double>(panels);
    impacts.energy_added +=
        count * (zip->energy_potential_total / zip->potential_installs);
    impacts.carbon_added +=
        count * (zip->carbon_offset_total / zip->potential_installs);
  }
  return impacts;
}

PlacementPlan run_strategy(const Dataset& dataset, const StrategySpec& spec,
                           std::int64_t budget) {
  PlacementPlan plan;
  switch (spec.kind) {
    case StrategySpec::Kind::status_quo:
      plan = status_quo_alloc(dataset, budget);
      break;
    case StrategySpec::Kind::greedy:
      plan = greedy_alloc(dataset, spec.ordering, budget);
      break;
    case StrategySpec::Kind::round_robin:
      plan = round_robin_alloc(dataset, spec.orderings, budget);
      break;
    case StrategySpec::Kind::weighted:
      plan = weighted_alloc(dataset, spec.terms, budget);
      break;
  }
  plan.strategy = spec.name;
  return plan;
}

std::vector<StrategySpec> default_strategies() {
  std::vector<StrategySpec> roster;

  StrategySpec status_quo;
  status_quo.name = "status_quo";
  status_quo.kind = StrategySpec::Kind::status_quo;
  roster.push_back(status_quo);

  auto greedy = [](std::string name, Attr attr, SortDirection direction) {
    StrategySpec spec;
    spec.name = std::move(name);
    spec.kind = StrategySpec::Kind::greedy;
    spec.ordering = {attr, direction};
    return spec;
  };
  roster.push_back(greedy("energy_greedy", Attr::energy_per_panel,
                          SortDirection::descending));
  roster.push_back(greedy("carbon_greedy", Attr::carbon_per_panel,
                          SortDirection::descending));
  roster.push_back(greedy("equity_black", Attr::race_share_black,
                          SortDirection::descending));
  roster.push_back(greedy("equity_income", Attr::median_income,
                          SortDirection::ascending));

  StrategySpec round_robin;
  round_robin.name = "round_robin";
  round_robin.kind = StrategySpec::Kind::round_robin;
  round_robin.orderings = default_round_robin_orderings();
  roster.push_back(round_robin);

  return roster;
}

const StrategySpec& find_strategy(const std::vector<StrategySpec>& roster,
                                  std::string_view name) {
  for (const auto& spec : roster) {
    if (spec.name == name) return spec;
  }
  std::string known;
  for (const auto& spec : roster) {
    if (!known.empty()) known += ", ";
    known += spec.name;
  }
  throw Error(ErrorCode::unknown_strategy,
              "unknown strategy '" + std::string(name) + "' (roster: " +
                  known + ")");
}

}  // namespace sitegrid
