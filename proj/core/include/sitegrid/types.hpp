#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sitegrid {

/// One ZIP code's rooftop-solar record after cleaning. Install counts and
/// the energy/carbon totals are full-ZIP estimates (coverage-corrected),
/// so percent_covered is 100 on every cleaned record.
struct ZipRecord {
  std::string zip_code;    // 5 characters
  std::string state_code;  // 2 letters, uppercase
  double existing_installs = 0.0;
  double potential_installs = 0.0;
  double energy_potential_total = 0.0;  // kWh/year at full buildout
  double carbon_offset_total = 0.0;     // kg CO2/year at full buildout
  double percent_covered = 100.0;       // in (0, 100]
  std::optional<double> median_income;  // USD/year
  std::optional<std::int64_t> population;
  std::optional<double> race_share_black;
  std::optional<double> race_share_white;
  std::optional<double> race_share_asian;
  std::optional<double> race_share_hispanic;

  bool operator==(const ZipRecord&) const = default;
};

/// State-level aggregate: unweighted means over the state's ZipRecords
/// plus the state-granularity overlays (2020 vote shares, generation mix).
struct StateRecord {
  std::string state_code;
  std::int64_t zip_count = 0;
  double mean_existing_installs = 0.0;
  double mean_potential_installs = 0.0;
  double mean_energy_potential_total = 0.0;
  double mean_carbon_offset_total = 0.0;
  double mean_percent_covered = 0.0;
  std::optional<double> mean_median_income;
  std::optional<double> mean_population;
  std::optional<double> mean_race_share_black;
  std::optional<double> mean_race_share_white;
  std::optional<double> mean_race_share_asian;
  std::optional<double> mean_race_share_hispanic;
  std::optional<double> republican_vote_share;  // write-ins excluded, sum <= 1
  std::optional<double> democratic_vote_share;
  std::map<std::string, double> generation_mix;  // fuel -> share, sums to 1

  bool operator==(const StateRecord&) const = default;
};

struct SourceInfo {
  std::string path;
  std::size_t rows_parsed = 0;
  std::size_t duplicate_zips = 0;  // later occurrences dropped, first kept

  bool operator==(const SourceInfo&) const = default;
};

/// Bookkeeping for the cleaning pipeline: where the data came from, how
/// many rows survived, and why the rest were dropped.
struct Provenance {
  SourceInfo sunroof;
  SourceInfo acs;
  std::optional<SourceInfo> voting;
  std::optional<SourceInfo> energy_mix;
  std::size_t intersection_size = 0;
  std::size_t retained = 0;
  std::map<std::string, std::size_t> drops;  // reason -> count
  std::size_t clamped_existing = 0;
  std::map<std::string, std::size_t> invalid_optional;  // field -> count
  std::vector<std::string> warnings;

  bool operator==(const Provenance&) const = default;
};

/// The cleaned dataset. zips is sorted by zip_code ascending with unique
/// codes; states (when populated) is sorted by state_code ascending and
/// covers every state_code present in zips.
struct Dataset {
  std::vector<ZipRecord> zips;
  std::vector<StateRecord> states;
  Provenance provenance;

  const ZipRecord* find_zip(std::string_view zip_code) const;
  const StateRecord* find_state(std::string_view state_code) const;
  double total_existing_installs() const;
};

}  // namespace sitegrid
