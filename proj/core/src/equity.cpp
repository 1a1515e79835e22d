#include "sitegrid/equity.hpp"

#include <algorithm>

#include "sitegrid/error.hpp"
#include "sitegrid/metrics.hpp"

namespace sitegrid {
namespace {

/// (unit id, attribute value) for every unit where the attribute is
/// defined, in unit-id order.
std::vector<std::pair<const std::string*, double>> collect_attr(
    const Dataset& dataset, Attr attr, Granularity granularity) {
  std::vector<std::pair<const std::string*, double>> values;
  if (granularity == Granularity::zip) {
    values.reserve(dataset.zips.size());
    for (const auto& zip : dataset.zips) {
      if (auto value = zip_attr(dataset, zip, attr)) {
        values.emplace_back(&zip.zip_code, *value);
      }
    }
  } else {
    values.reserve(dataset.states.size());
    for (const auto& state : dataset.states) {
      if (auto value = state_attr(dataset, state, attr)) {
        values.emplace_back(&state.state_code, *value);
      }
    }
  }
  return values;
}

std::optional<double> unit_attr(const Dataset& dataset, const std::string& id,
                                Attr attr, Granularity granularity) {
  if (granularity == Granularity::zip) {
    const ZipRecord* zip = dataset.find_zip(id);
    return zip ? zip_attr(dataset, *zip, attr) : std::nullopt;
  }
  const StateRecord* state = dataset.find_state(id);
  return state ? state_attr(dataset, *state, attr) : std::nullopt;
}

/// Population weight for the weighted variant; 0 excludes the unit.
double unit_weight(const Dataset& dataset, const std::string& id,
                   Granularity granularity, Weighting weighting) {
  if (weighting == Weighting::unit) return 1.0;
  if (granularity == Granularity::zip) {
    const ZipRecord* zip = dataset.find_zip(id);
    return zip && zip->population ? static_cast<double>(*zip->population)
                                  : 0.0;
  }
  const StateRecord* state = dataset.find_state(id);
  if (!state || !state->mean_population) return 0.0;
  return *state->mean_population * static_cast<double>(state->zip_count);
}

double group_mean(const Dataset& dataset,
                  const std::vector<std::string>& ids, Attr attr,
                  Granularity granularity, Weighting weighting,
                  const std::string& what) {
  double sum = 0.0;
  double wsum = 0.0;
  for (const auto& id : ids) {
    auto value = unit_attr(dataset, id, attr, granularity);
    if (!value) continue;
    double w = unit_weight(dataset, id, granularity, weighting);
    sum += w * *value;
    wsum += w;
  }
  if (!(wsum > 0.0)) {
    throw Error(ErrorCode::undefined_statistic,
                "no usable units for " + what);
  }
  return sum / wsum;
}

std::vector<std::string> all_unit_ids(const Dataset& dataset,
                                      Granularity granularity) {
  std::vector<std::string> ids;
  if (granularity == Granularity::zip) {
    ids.reserve(dataset.zips.size());
    for (const auto& zip : dataset.zips) ids.push_back(zip.zip_code);
  } else {
    ids.reserve(dataset.states.size());
    for (const auto& state : dataset.states) ids.push_back(state.state_code);
  }
  return ids;
}

}  // namespace

Granularity granularity_from_name(std::string_view name) {
  if (name == "zip") return Granularity::zip;
  if (name == "state") return Granularity::state;
  throw Error(ErrorCode::invalid_argument,
              "unknown granularity: " + std::string(name));
}

Weighting weighting_from_name(std::string_view name) {
  if (name == "unit") return Weighting::unit;
  if (name == "population") return Weighting::population;
  throw Error(ErrorCode::invalid_argument,
              "unknown weighting: " + std::string(name));
}

std::string_view granularity_name(Granularity granularity) {
  return granularity == Granularity::zip ? "zip" : "state";
}

std::string_view weighting_name(Weighting weighting) {
  return weighting == Weighting::unit ? "unit" : "population";
}

std::string split_label(const SplitSpec& spec) {
  std::string label(attr_name(spec.attribute));
  label += spec.side == SplitSide::above ? "_above_median" : "_below_median";
  return label;
}

std::vector<SplitSpec> default_split_specs() {
  return {
      {Attr::race_share_black, SplitSide::above, Granularity::zip},
      {Attr::race_share_asian, SplitSide::above, Granularity::zip},
      {Attr::race_share_white, SplitSide::above, Granularity::zip},
      {Attr::median_income, SplitSide::below, Granularity::zip},
  };
}

MedianSplit median_split(const Dataset& dataset, Attr attribute,
                         Granularity granularity) {
  auto values = collect_attr(dataset, attribute, granularity);
  if (values.empty()) {
    throw Error(ErrorCode::undefined_statistic,
                "attribute " + std::string(attr_name(attribute)) +
                    " is absent from every unit");
  }
  std::vector<double> raw;
  raw.reserve(values.size());
  for (const auto& [id, value] : values) raw.push_back(value);

  MedianSplit split;
  split.median = median(std::move(raw));
  for (const auto& [id, value] : values) {
    if (value > split.median) {
      split.above.push_back(*id);
    } else {
      split.below.push_back(*id);
    }
  }
  return split;
}

EquityReport equity_report(const Dataset& dataset,
                           const std::vector<SplitSpec>& specs,
                           const PlacementPlan* placement,
                           Weighting weighting) {
  Dataset adjusted = dataset;
  if (placement) {
    for (const auto& [zip_code, panels] : placement->placements) {
      auto it = std::lower_bound(
          adjusted.zips.begin(), adjusted.zips.end(), zip_code,
          [](const ZipRecord& record, const std::string& key) {
            return record.zip_code < key;
          });
      if (it == adjusted.zips.end() || it->zip_code != zip_code) {
        throw Error(ErrorCode::unknown_zip,
                    "placement references unknown zip " + zip_code);
      }
      it->existing_installs += static_cast<double>(panels);
    }
  }

  EquityReport report;
  report.weighting = weighting;
  for (const auto& spec : specs) {
    MedianSplit split = median_split(adjusted, spec.attribute,
                                     spec.granularity);
    const auto& group_ids =
        spec.side == SplitSide::above ? split.above : split.below;

    EquityRow row;
    row.spec = spec;
    row.group = split_label(spec);
    row.group_size = group_ids.size();
    row.split_median = split.median;
    row.group_mean_realized =
        group_mean(adjusted, group_ids, Attr::realized_potential,
                   spec.granularity, weighting,
                   "group " + row.group + " realized potential");
    row.group_mean_carbon_per_panel =
        group_mean(adjusted, group_ids, Attr::carbon_per_panel,
                   spec.granularity, weighting,
                   "group " + row.group + " carbon offset per panel");

    auto national_ids = all_unit_ids(adjusted, spec.granularity);
    row.national_mean_realized =
        group_mean(adjusted, national_ids, Attr::realized_potential,
                   spec.granularity, weighting, "national realized potential");
    row.national_mean_carbon_per_panel = group_mean(
        adjusted, national_ids, Attr::carbon_per_panel, spec.granularity,
        weighting, "national carbon offset per panel");

    if (!(row.national_mean_realized > 0.0) ||
        !(row.national_mean_carbon_per_panel > 0.0)) {
      throw Error(ErrorCode::undefined_statistic,
                  "national mean is zero; ratios undefined");
    }
    row.realized_ratio = row.group_mean_realized / row.national_mean_realized;
    row.carbon_ratio =
        row.group_mean_carbon_per_panel / row.national_mean_carbon_per_panel;
    row.realized_pct_diff = (row.realized_ratio - 1.0) * 100.0;
    row.carbon_pct_diff = (row.carbon_ratio - 1.0) * 100.0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace sitegrid
