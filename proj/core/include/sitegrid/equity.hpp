#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sitegrid/attributes.hpp"
#include "sitegrid/strategies.hpp"
#include "sitegrid/types.hpp"

namespace sitegrid {

enum class Granularity { zip, state };
enum class SplitSide { above, below };
enum class Weighting { unit, population };

Granularity granularity_from_name(std::string_view name);
Weighting weighting_from_name(std::string_view name);
std::string_view granularity_name(Granularity granularity);
std::string_view weighting_name(Weighting weighting);

/// One demographic group: the units on one side of the empirical median
/// of an attribute.
struct SplitSpec {
  Attr attribute = Attr::race_share_black;
  SplitSide side = SplitSide::above;
  Granularity granularity = Granularity::zip;

  bool operator==(const SplitSpec&) const = default;
};

/// e.g. "race_share_black_above_median".
std::string split_label(const SplitSpec& spec);

/// The default report groups: Black share above, Asian share above, White share
/// above, median income below; ZIP granularity.
std::vector<SplitSpec> default_split_specs();

struct MedianSplit {
  double median = 0.0;
  std::vector<std::string> above;  // unit ids strictly above the median
  std::vector<std::string> below;  // unit ids at or below
};

/// Partition units (ZIPs or states) at the empirical median of the
/// attribute; units missing the attribute join neither group. Throws
/// Error{undefined_statistic} when the attribute is absent everywhere.
MedianSplit median_split(const Dataset& dataset, Attr attribute,
                         Granularity granularity);

/// One report row per split spec. Ratios are group mean / national mean;
/// percent differences are (ratio - 1) * 100.
struct EquityRow {
  SplitSpec spec;
  std::string group;  // split_label(spec)
  std::size_t group_size = 0;
  double split_median = 0.0;
  double group_mean_realized = 0.0;
  double group_mean_carbon_per_panel = 0.0;
  double national_mean_realized = 0.0;
  double national_mean_carbon_per_panel = 0.0;
  double realized_ratio = 0.0;
  double carbon_ratio = 0.0;
  double realized_pct_diff = 0.0;
  double carbon_pct_diff = 0.0;
};

struct EquityReport {
  Weighting weighting = Weighting::unit;
  std::vector<EquityRow> rows;
};

/// Compute the per-group statistics, optionally after applying a
/// placement plan (placed panels raise existing_installs; carbon per
/// panel is a property of location and does not move). Means are
/// unweighted over units unless population weighting is selected. Throws
/// Error{unknown_zip} when the plan names a ZIP not in the dataset.
EquityReport equity_report(const Dataset& dataset,
                           const std::vector<SplitSpec>& specs,
                           const PlacementPlan* placement = nullptr,
                           Weighting weighting = Weighting::unit);

}  // namespace sitegrid
