#pragma once

#include <optional>
#include <string_view>

#include "sitegrid/types.hpp"

namespace sitegrid {

/// Named scalar attributes usable as ordering keys, split keys and
/// weighted-score inputs. Vote shares are state-level data; at ZIP
/// granularity they are inherited from the containing state.
enum class Attr {
  existing_installs,
  potential_installs,
  energy_potential_total,
  carbon_offset_total,
  percent_covered,
  median_income,
  population,
  race_share_black,
  race_share_white,
  race_share_asian,
  race_share_hispanic,
  energy_per_panel,
  carbon_per_panel,
  realized_potential,
  republican_vote_share,
  democratic_vote_share,
};

std::string_view attr_name(Attr attr);

/// Parse an attribute name; throws Error{unknown_attribute} listing the
/// offending name.
Attr attr_from_name(std::string_view name);

/// Attribute value for one ZIP. Per-panel attributes are absent when
/// potential_installs is 0; vote shares are absent when the containing
/// state has no voting overlay.
std::optional<double> zip_attr(const Dataset& dataset, const ZipRecord& zip,
                               Attr attr);

/// Attribute value at state granularity. Stored fields come straight from
/// the StateRecord means; per-panel attributes are unweighted means of the
/// member ZIPs' per-panel values (ZIPs with zero potential skipped).
std::optional<double> state_attr(const Dataset& dataset,
                                 const StateRecord& state, Attr attr);

}  // namespace sitegrid
