#include "sitegrid/attributes.hpp"

#include <array>
#include <utility>

#include "sitegrid/error.hpp"

namespace sitegrid {
namespace {

constexpr std::array<std::pair<Attr, std::string_view>, 16> kAttrNames{{
    {Attr::existing_installs, "existing_installs"},
    {Attr::potential_installs, "potential_installs"},
    {Attr::energy_potential_total, "energy_potential_total"},
    {Attr::carbon_offset_total, "carbon_offset_total"},
    {Attr::percent_covered, "percent_covered"},
    {Attr::median_income, "median_income"},
    {Attr::population, "population"},
    {Attr::race_share_black, "race_share_black"},
    {Attr::race_share_white, "race_share_white"},
    {Attr::race_share_asian, "race_share_asian"},
    {Attr::race_share_hispanic, "race_share_hispanic"},
    {Attr::energy_per_panel, "energy_per_panel"},
    {Attr::carbon_per_panel, "carbon_per_panel"},
    {Attr::realized_potential, "realized_potential"},
    {Attr::republican_vote_share, "republican_vote_share"},
    {Attr::democratic_vote_share, "democratic_vote_share"},
}};

std::optional<double> to_value(const std::optional<std::int64_t>& value) {
  if (!value) return std::nullopt;
  return static_cast<double>(*value);
}

}  // namespace

std::string_view attr_name(Attr attr) {
  for (const auto& [value, name] : kAttrNames) {
    if (value == attr) return name;
  }
  return "unknown";
}

Attr attr_from_name(std::string_view name) {
  for (const auto& [value, attr_text] : kAttrNames) {
    if (attr_text == name) return value;
  }
  throw Error(ErrorCode::unknown_attribute,
              "unknown attribute: " + std::string(name));
}

std::optional<double> zip_attr(const Dataset& dataset, const ZipRecord& zip,
                               Attr attr) {
  switch (attr) {
    case Attr::existing_installs: return zip.existing_installs;
    case Attr::potential_installs: return zip.potential_installs;
    case Attr::energy_potential_total: return zip.energy_potential_total;
    case Attr::carbon_offset_total: return zip.carbon_offset_total;
    case Attr::percent_covered: return zip.percent_covered;
    case Attr::median_income: return zip.median_income;
    case Attr::population: return to_value(zip.population);
    case Attr::race_share_black: return zip.race_share_black;
    case Attr::race_share_white: return zip.race_share_white;
    case Attr::race_share_asian: return zip.race_share_asian;
    case Attr::race_share_hispanic: return zip.race_share_hispanic;
    case Attr::energy_per_panel:
      if (zip.potential_installs <= 0.0) return std::nullopt;
      return zip.energy_potential_total / zip.potential_installs;
    case Attr::carbon_per_panel:
      if (zip.potential_installs <= 0.0) return std::nullopt;
      return zip.carbon_offset_total / zip.potential_installs;
    case Attr::realized_potential:
      if (zip.potential_installs <= 0.0) return std::nullopt;
      return 100.0 * zip.existing_installs / zip.potential_installs;
    case Attr::republican_vote_share:
    case Attr::democratic_vote_share: {
      const StateRecord* state = dataset.find_state(zip.state_code);
      if (!state) return std::nullopt;
      return attr == Attr::republican_vote_share ? state->republican_vote_share
                                                 : state->democratic_vote_share;
    }
  }
  return std::nullopt;
}

std::optional<double> state_attr(const Dataset& dataset,
                                 const StateRecord& state, Attr attr) {
  switch (attr) {
    case Attr::existing_installs: return state.mean_existing_installs;
    case Attr::potential_installs: return state.mean_potential_installs;
    case Attr::energy_potential_total:
      return state.mean_energy_potential_total;
    case Attr::carbon_offset_total: return state.mean_carbon_offset_total;
    case Attr::percent_covered: return state.mean_percent_covered;
    case Attr::median_income: return state.mean_median_income;
    case Attr::population: return state.mean_population;
    case Attr::race_share_black: return state.mean_race_share_black;
    case Attr::race_share_white: return state.mean_race_share_white;
    case Attr::race_share_asian: return state.mean_race_share_asian;
    case Attr::race_share_hispanic: return state.mean_race_share_hispanic;
    case Attr::republican_vote_share: return state.republican_vote_share;
    case Attr::democratic_vote_share: return state.democratic_vote_share;
    case Attr::energy_per_panel:
    case Attr::carbon_per_panel:
    case Attr::realized_potential: {
      // Mean of the member ZIPs' per-panel values, ascending zip_code.
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& zip : dataset.zips) {
        if (zip.state_code != state.state_code) continue;
        auto value = zip_attr(dataset, zip, attr);
        if (!value) continue;
        sum += *value;
        ++n;
      }
      if (n == 0) return std::nullopt;
      return sum / static_cast<double>(n);
    }
  }
  return std::nullopt;
}

}  // namespace sitegrid
