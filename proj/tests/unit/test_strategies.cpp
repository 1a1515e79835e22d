#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "sitegrid/error.hpp"
#include "sitegrid/strategies.hpp"
#include "support.hpp"

using namespace sitegrid;
namespace ts = testsupport;

namespace {

/// A: cap 3, 10 kg/panel. B: cap 2, 20 kg/panel. C: cap 5, 15 kg/panel.
/// Every panel yields 100 kWh. Total capacity 10.
Dataset abc_fixture() {
  return ts::dataset({
      ts::zip("00501", "NY", 0, 3, 300, 30),
      ts::zip("00502", "NY", 0, 2, 200, 40),
      ts::zip("00503", "CT", 0, 5, 500, 75),
  });
}

/// Mixed fixture with demographics, a saturated ZIP, and fractional
/// capacities. Total remaining capacity 46.
Dataset rich_fixture() {
  auto with = [](ZipRecord zip, std::optional<double> income, double black) {
    zip.median_income = income;
    zip.race_share_black = black;
    return zip;
  };
  return ts::dataset({
      with(ts::zip("00501", "NY", 5, 10.5, 105, 21), 40000, 0.6),
      with(ts::zip("00502", "NY", 0, 8, 96, 40), 65000, 0.1),
      with(ts::zip("00503", "CT", 12, 12, 120, 36), 55000, 0.4),
      with(ts::zip("00504", "CT", 3, 20, 100, 160), 25000, 0.8),
      with(ts::zip("00505", "NJ", 7, 9.25, 55.5, 18.5), std::nullopt, 0.3),
      with(ts::zip("00506", "NJ", 1, 15, 300, 45), 90000, 0.05),
  });
}

std::int64_t placed_sum(const PlacementPlan& plan) {
  std::int64_t sum = 0;
  for (const auto& [zip, panels] : plan.placements) sum += panels;
  return sum;
}

/// Max carbon over every exact allocation of `budget` panels into caps
/// {3, 2, 5} at 10/20/15 kg per panel.
double best_carbon_by_enumeration(std::int64_t budget) {
  double best = -1.0;
  for (std::int64_t a = 0; a <= 3; ++a) {
    for (std::int64_t b = 0; b <= 2; ++b) {
      for (std::int64_t c = 0; c <= 5; ++c) {
        if (a + b + c != budget) continue;
        double carbon = 10.0 * static_cast<double>(a) +
                        20.0 * static_cast<double>(b) +
                        15.0 * static_cast<double>(c);
        best = std::max(best, carbon);
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("remaining_capacity floors the install gap") {
  ZipRecord zip = ts::zip("00501", "NY", 3, 10.7, 100, 10);
  CHECK(remaining_capacity(zip) == 7);
  CHECK(remaining_capacity(ts::zip("00501", "NY", 12, 12, 100, 10)) == 0);
  CHECK(remaining_capacity(ts::zip("00501", "NY", 0, 5, 100, 10)) == 5);
  CHECK(remaining_capacity(ts::zip("00501", "NY", 9, 5, 100, 10)) == 0);
}

TEST_CASE("total_remaining_capacity sums the fixture") {
  CHECK(total_remaining_capacity(abc_fixture()) == 10);
  CHECK(total_remaining_capacity(rich_fixture()) == 46);
}

TEST_CASE("carbon-greedy fills the best ZIPs first") {
  Dataset dataset = abc_fixture();
  OrderingSpec carbon_desc{Attr::carbon_per_panel, SortDirection::descending};
  PlacementPlan plan = greedy_alloc(dataset, carbon_desc, 4);
  CHECK(plan.placements ==
        std::map<std::string, std::int64_t>{{"00502", 2}, {"00503", 2}});
  CHECK(plan.total_placed == 4);
  CHECK_FALSE(plan.saturated);

  PlanImpacts impacts = plan_impacts(dataset, plan);
  CHECK(impacts.carbon_added == doctest::Approx(70.0));
  CHECK(impacts.energy_added == doctest::Approx(400.0));
}

TEST_CASE("greedy matches exhaustive enumeration at every budget") {
  Dataset dataset = abc_fixture();
  OrderingSpec carbon_desc{Attr::carbon_per_panel, SortDirection::descending};
  for (std::int64_t budget = 0; budget <= 10; ++budget) {
    PlacementPlan plan = greedy_alloc(dataset, carbon_desc, budget);
    double carbon = plan_impacts(dataset, plan).carbon_added;
    CHECK(carbon == doctest::Approx(best_carbon_by_enumeration(budget)));
  }
}

TEST_CASE("budget 0 places nothing") {
  PlacementPlan plan = greedy_alloc(
      abc_fixture(), {Attr::carbon_per_panel, SortDirection::descending}, 0);
  CHECK(plan.placements.empty());
  CHECK(plan.total_placed == 0);
  CHECK_FALSE(plan.saturated);
}

TEST_CASE("budget at capacity fills everything; beyond it saturates") {
  Dataset dataset = abc_fixture();
  OrderingSpec carbon_desc{Attr::carbon_per_panel, SortDirection::descending};
  PlacementPlan exact = greedy_alloc(dataset, carbon_desc, 10);
  CHECK(exact.total_placed == 10);
  CHECK(exact.placements.size() == 3);
  CHECK_FALSE(exact.saturated);

  PlacementPlan over = greedy_alloc(dataset, carbon_desc, 11);
  CHECK(over.total_placed == 10);
  CHECK(over.placements == exact.placements);
  CHECK(over.saturated);
}

TEST_CASE("greedy rejects a negative budget") {
  CHECK(ts::error_code_of([&] {
          greedy_alloc(abc_fixture(),
                       {Attr::carbon_per_panel, SortDirection::descending},
                       -1);
        }) == ErrorCode::invalid_argument);
}

TEST_CASE("ordering ties break by zip code ascending") {
  Dataset dataset = ts::dataset({
      ts::zip("00502", "NY", 0, 1, 100, 10),
      ts::zip("00501", "NY", 0, 1, 100, 10),
  });
  PlacementPlan plan = greedy_alloc(
      dataset, {Attr::carbon_per_panel, SortDirection::descending}, 1);
  CHECK(plan.placements ==
        std::map<std::string, std::int64_t>{{"00501", 1}});
}

TEST_CASE("ZIPs missing the ordering attribute rank last") {
  ZipRecord rich = ts::zip("00501", "NY", 0, 1, 100, 10);
  rich.median_income = 50000;
  ZipRecord unknown = ts::zip("00500", "NY", 0, 5, 100, 10);
  Dataset dataset = ts::dataset({unknown, rich});
  PlacementPlan plan = greedy_alloc(
      dataset, {Attr::median_income, SortDirection::ascending}, 3);
  CHECK(plan.placements ==
        std::map<std::string, std::int64_t>{{"00500", 2}, {"00501", 1}});
}

TEST_CASE("status quo apportions proportional to existing installs") {
  Dataset dataset = ts::dataset({
      ts::zip("00501", "NY", 10, 110, 100, 10),
      ts::zip("00502", "NY", 30, 130, 100, 10),
      ts::zip("00503", "CT", 60, 160, 100, 10),
  });
  PlacementPlan plan = status_quo_alloc(dataset, 10);
  CHECK(plan.placements == std::map<std::string, std::int64_t>{
                               {"00501", 1}, {"00502", 3}, {"00503", 6}});
  CHECK(plan.total_placed == 10);
}

TEST_CASE("status quo breaks remainder ties by zip code") {
  Dataset dataset = ts::dataset({
      ts::zip("00501", "NY", 20, 120, 100, 10),
      ts::zip("00502", "NY", 20, 120, 100, 10),
      ts::zip("00503", "CT", 20, 120, 100, 10),
  });
  PlacementPlan plan = status_quo_alloc(dataset, 10);
  CHECK(plan.placements == std::map<std::string, std::int64_t>{
                               {"00501", 4}, {"00502", 3}, {"00503", 3}});
}

TEST_CASE("status quo re-apportions overflow from capped ZIPs") {
  Dataset dataset = ts::dataset({
      ts::zip("00501", "NY", 90, 95, 100, 10),    // capacity 5
      ts::zip("00502", "NY", 10, 1000, 100, 10),  // effectively unbounded
  });
  PlacementPlan plan = status_quo_alloc(dataset, 20);
  CHECK(plan.placements ==
        std::map<std::string, std::int64_t>{{"00501", 5}, {"00502", 15}});
  CHECK(plan.total_placed == 20);
}

TEST_CASE("status quo needs at least one existing install") {
  Dataset dataset = ts::dataset({
      ts::zip("00501", "NY", 0, 10, 100, 10),
      ts::zip("00502", "NY", 0, 10, 100, 10),
  });
  CHECK(ts::error_code_of([&] { status_quo_alloc(dataset, 5); }) ==
        ErrorCode::undefined_distribution);
}

TEST_CASE("status quo spills into zero-weight ZIPs only when forced") {
  Dataset dataset = ts::dataset({
      ts::zip("00501", "NY", 0, 5, 100, 10),
      ts::zip("00502", "NY", 10, 12, 100, 10),  // capacity 2
  });
  PlacementPlan plan = status_quo_alloc(dataset, 6);
  CHECK(plan.placements ==
        std::map<std::string, std::int64_t>{{"00501", 4}, {"00502", 2}});
  CHECK(plan.total_placed == 6);
}

TEST_CASE("round robin skips ZIPs another list already claimed") {
  // Energy and carbon rankings share the same head ZIP.
  Dataset dataset = ts::dataset({
      ts::zip("00501", "NY", 0, 1, 400, 40),  // best on both axes
      ts::zip("00502", "NY", 0, 1, 300, 10),  // second on energy
      ts::zip("00503", "CT", 0, 1, 100, 30),  // second on carbon
      ts::zip("00504", "CT", 0, 1, 50, 5),
  });
  std::vector<OrderingSpec> orderings = {
      {Attr::energy_per_panel, SortDirection::descending},
      {Attr::carbon_per_panel, SortDirection::descending},
  };
  PlacementPlan plan = round_robin_alloc(dataset, orderings, 2);
  CHECK(plan.placements ==
        std::map<std::string, std::int64_t>{{"00501", 1}, {"00503", 1}});
}

TEST_CASE("round robin takes one head from each list") {
  Dataset dataset = ts::dataset({
      ts::zip("00501", "NY", 0, 1, 400, 10),  // energy head
      ts::zip("00502", "NY", 0, 1, 300, 40),  // carbon head
      ts::zip("00503", "CT", 0, 1, 200, 30),
      ts::zip("00504", "CT", 0, 1, 100, 20),
  });
  std::vector<OrderingSpec> orderings = {
      {Attr::energy_per_panel, SortDirection::descending},
      {Attr::carbon_per_panel, SortDirection::descending},
  };
  PlacementPlan plan = round_robin_alloc(dataset, orderings, 2);
  CHECK(plan.placements ==
        std::map<std::string, std::int64_t>{{"00501", 1}, {"00502", 1}});
}

TEST_CASE("round robin with a single ordering is plain greedy") {
  Dataset dataset = rich_fixture();
  OrderingSpec carbon_desc{Attr::carbon_per_panel, SortDirection::descending};
  for (std::int64_t budget : {0, 1, 5, 13, 46, 50}) {
    PlacementPlan robin = round_robin_alloc(dataset, {carbon_desc}, budget);
    PlacementPlan greedy = greedy_alloc(dataset, carbon_desc, budget);
    CHECK(robin.placements == greedy.placements);
    CHECK(robin.total_placed == greedy.total_placed);
    CHECK(robin.saturated == greedy.saturated);
  }
}

TEST_CASE("round robin fills its last ZIP partially to hit the budget") {
  Dataset dataset = abc_fixture();
  PlacementPlan plan = round_robin_alloc(
      dataset, default_round_robin_orderings(), 3);
  CHECK(plan.total_placed == 3);
  CHECK(placed_sum(plan) == 3);
}

TEST_CASE("round robin rejects an empty ordering set") {
  CHECK(ts::error_code_of([&] {
          round_robin_alloc(abc_fixture(), {}, 1);
        }) == ErrorCode::invalid_argument);
}

TEST_CASE("default round robin rotation") {
  auto orderings = default_round_robin_orderings();
  REQUIRE(orderings.size() == 4);
  CHECK(orderings[0] ==
        OrderingSpec{Attr::energy_per_panel, SortDirection::descending});
  CHECK(orderings[1] ==
        OrderingSpec{Attr::carbon_per_panel, SortDirection::descending});
  CHECK(orderings[2] ==
        OrderingSpec{Attr::race_share_black, SortDirection::descending});
  CHECK(orderings[3] ==
        OrderingSpec{Attr::median_income, SortDirection::ascending});
}

TEST_CASE("weighted with one carbon term reproduces carbon-greedy") {
  Dataset dataset = rich_fixture();
  std::vector<WeightedTerm> terms = {
      {Attr::carbon_per_panel, SortDirection::descending, 1.0}};
  OrderingSpec carbon_desc{Attr::carbon_per_panel, SortDirection::descending};
  for (std::int64_t budget : {1, 4, 12, 46}) {
    PlacementPlan weighted = weighted_alloc(dataset, terms, budget);
    PlacementPlan greedy = greedy_alloc(dataset, carbon_desc, budget);
    CHECK(weighted.placements == greedy.placements);
  }
}

TEST_CASE("weighted scores are invariant to rescaling all weights") {
  Dataset dataset = rich_fixture();
  std::vector<WeightedTerm> base = {
      {Attr::carbon_per_panel, SortDirection::descending, 1.0},
      {Attr::median_income, SortDirection::ascending, 2.0}};
  std::vector<WeightedTerm> scaled = base;
  for (auto& term : scaled) term.weight *= 10.0;
  for (std::int64_t budget : {3, 9, 20}) {
    CHECK(weighted_alloc(dataset, base, budget).placements ==
          weighted_alloc(dataset, scaled, budget).placements);
  }
}

TEST_CASE("weighted hand-scored two-attribute ordering") {
  // energy/panel {10, 6, 2} and carbon/panel {1, 5, 3}; weights 1 and 2.
  // Normalized scores: A 1.0, B 2.5, C 1.0. Order B, A, C.
  Dataset dataset = ts::dataset({
      ts::zip("00501", "NY", 0, 1, 10, 1),
      ts::zip("00502", "NY", 0, 1, 6, 5),
      ts::zip("00503", "CT", 0, 1, 2, 3),
  });
  std::vector<WeightedTerm> terms = {
      {Attr::energy_per_panel, SortDirection::descending, 1.0},
      {Attr::carbon_per_panel, SortDirection::descending, 2.0}};
  PlacementPlan plan = weighted_alloc(dataset, terms, 2);
  CHECK(plan.placements ==
        std::map<std::string, std::int64_t>{{"00501", 1}, {"00502", 1}});
}

TEST_CASE("ascending weighted terms reward low values") {
  ZipRecord poor = ts::zip("00501", "NY", 0, 5, 100, 10);
  poor.median_income = 10000;
  ZipRecord wealthy = ts::zip("00502", "NY", 0, 5, 100, 10);
  wealthy.median_income = 50000;
  Dataset dataset = ts::dataset({poor, wealthy});
  std::vector<WeightedTerm> terms = {
      {Attr::median_income, SortDirection::ascending, 1.0}};
  PlacementPlan plan = weighted_alloc(dataset, terms, 5);
  CHECK(plan.placements ==
        std::map<std::string, std::int64_t>{{"00501", 5}});
}

TEST_CASE("constant attributes contribute nothing to weighted scores") {
  Dataset dataset = abc_fixture();  // energy/panel constant at 100
  std::vector<WeightedTerm> terms = {
      {Attr::energy_per_panel, SortDirection::descending, 5.0},
      {Attr::carbon_per_panel, SortDirection::descending, 1.0}};
  std::vector<WeightedTerm> carbon_only = {
      {Attr::carbon_per_panel, SortDirection::descending, 1.0}};
  CHECK(weighted_alloc(dataset, terms, 4).placements ==
        weighted_alloc(dataset, carbon_only, 4).placements);
}

TEST_CASE("weighted rejects all-zero weights") {
  std::vector<WeightedTerm> terms = {
      {Attr::carbon_per_panel, SortDirection::descending, 0.0}};
  CHECK(ts::error_code_of([&] { weighted_alloc(abc_fixture(), terms, 1); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("plan_impacts of an empty plan is zero") {
  PlacementPlan plan;
  PlanImpacts impacts = plan_impacts(abc_fixture(), plan);
  CHECK(impacts == PlanImpacts{0.0, 0.0});
}

TEST_CASE("plan_impacts prices one panel at the per-panel values") {
  Dataset dataset = ts::dataset({ts::zip("00501", "NY", 0, 10, 1000, 200)});
  PlacementPlan plan;
  plan.placements = {{"00501", 1}};
  PlanImpacts impacts = plan_impacts(dataset, plan);
  CHECK(impacts.energy_added == doctest::Approx(100.0));
  CHECK(impacts.carbon_added == doctest::Approx(20.0));
}

TEST_CASE("plan_impacts rejects unknown ZIPs and capacity overshoot") {
  Dataset dataset = abc_fixture();
  PlacementPlan unknown;
  unknown.placements = {{"99999", 1}};
  CHECK(ts::error_code_of([&] { plan_impacts(dataset, unknown); }) ==
        ErrorCode::unknown_zip);

  PlacementPlan overshoot;
  overshoot.placements = {{"00502", 3}};  // capacity 2
  CHECK(ts::error_code_of([&] { plan_impacts(dataset, overshoot); }) ==
        ErrorCode::capacity_exceeded);

  PlacementPlan negative;
  negative.placements = {{"00501", -1}};
  CHECK(ts::error_code_of([&] { plan_impacts(dataset, negative); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("every strategy conserves panels and respects capacities") {
  Dataset dataset = rich_fixture();
  std::int64_t capacity = total_remaining_capacity(dataset);
  for (const auto& spec : default_strategies()) {
    for (std::int64_t budget : {0, 1, 3, 7, 10, 17, 46, 60}) {
      CAPTURE(spec.name);
      CAPTURE(budget);
      PlacementPlan plan = run_strategy(dataset, spec, budget);
      CHECK(plan.strategy == spec.name);
      CHECK(plan.budget == budget);
      CHECK(plan.total_placed == std::min(budget, capacity));
      CHECK(placed_sum(plan) == plan.total_placed);
      CHECK(plan.saturated == (budget > capacity));
      for (const auto& [zip_code, panels] : plan.placements) {
        CHECK(panels > 0);
        CHECK(panels <= remaining_capacity(*dataset.find_zip(zip_code)));
      }
    }
  }
}

TEST_CASE("impacts are monotone in the budget for every strategy") {
  Dataset dataset = rich_fixture();
  for (const auto& spec : default_strategies()) {
    double last_energy = 0.0;
    double last_carbon = 0.0;
    for (std::int64_t budget : {0, 2, 5, 11, 23, 46}) {
      PlanImpacts impacts =
          plan_impacts(dataset, run_strategy(dataset, spec, budget));
      CAPTURE(spec.name);
      CAPTURE(budget);
      CHECK(impacts.energy_added >= last_energy);
      CHECK(impacts.carbon_added >= last_carbon);
      last_energy = impacts.energy_added;
      last_carbon = impacts.carbon_added;
    }
  }
}

TEST_CASE("carbon-greedy dominates every other strategy on carbon") {
  Dataset dataset = rich_fixture();
  auto roster = default_strategies();
  const StrategySpec& carbon_greedy = find_strategy(roster, "carbon_greedy");
  const StrategySpec& energy_greedy = find_strategy(roster, "energy_greedy");
  for (std::int64_t budget : {1, 5, 12, 30, 46}) {
    double best_carbon =
        plan_impacts(dataset, run_strategy(dataset, carbon_greedy, budget))
            .carbon_added;
    double best_energy =
        plan_impacts(dataset, run_strategy(dataset, energy_greedy, budget))
            .energy_added;
    for (const auto& spec : roster) {
      PlanImpacts impacts =
          plan_impacts(dataset, run_strategy(dataset, spec, budget));
      CAPTURE(spec.name);
      CAPTURE(budget);
      CHECK(impacts.carbon_added <= best_carbon + 1e-9);
      CHECK(impacts.energy_added <= best_energy + 1e-9);
    }
  }
}

TEST_CASE("round robin lands between its constituent greedy plans") {
  Dataset dataset = rich_fixture();
  auto orderings = default_round_robin_orderings();
  for (std::int64_t budget : {1, 5, 12, 30, 46}) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& ordering : orderings) {
      double carbon =
          plan_impacts(dataset, greedy_alloc(dataset, ordering, budget))
              .carbon_added;
      lo = std::min(lo, carbon);
      hi = std::max(hi, carbon);
    }
    double robin =
        plan_impacts(dataset, round_robin_alloc(dataset, orderings, budget))
            .carbon_added;
    CAPTURE(budget);
    CHECK(robin >= lo - 1e-9);
    CHECK(robin <= hi + 1e-9);
  }
}

TEST_CASE("strategies are deterministic") {
  Dataset dataset = rich_fixture();
  for (const auto& spec : default_strategies()) {
    PlacementPlan first = run_strategy(dataset, spec, 17);
    PlacementPlan second = run_strategy(dataset, spec, 17);
    CHECK(first == second);
  }
}

TEST_CASE("the default roster carries the published strategy names") {
  auto roster = default_strategies();
  std::vector<std::string> names;
  for (const auto& spec : roster) names.push_back(spec.name);
  CHECK(names == std::vector<std::string>{"status_quo", "energy_greedy",
                                          "carbon_greedy", "equity_black",
                                          "equity_income", "round_robin"});
  CHECK(find_strategy(roster, "carbon_greedy").kind ==
        StrategySpec::Kind::greedy);
  CHECK(ts::error_code_of([&] { find_strategy(roster, "nope"); }) ==
        ErrorCode::unknown_strategy);
}
