#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sitegrid/types.hpp"

namespace sitegrid {

/// Fields a ZIP-level source file can supply.
enum class ZipField {
  zip_code,
  state_code,
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
};

std::string_view zip_field_name(ZipField field);

/// Maps a field to a source column, with an optional multiplicative
/// rescale (e.g. 0.01 to turn percentages into shares).
struct ColumnSpec {
  std::string column;
  double scale = 1.0;

  bool operator==(const ColumnSpec&) const = default;
};

using SchemaMap = std::map<ZipField, ColumnSpec>;

/// Column mappings matching the canonical file layout (identity mapping).
SchemaMap sunroof_schema_canonical();
SchemaMap acs_schema_canonical();

/// One numeric cell from a source row. `malformed` means the cell held
/// text that failed numeric parsing; `missing` means it was empty or the
/// column was not mapped.
struct CellValue {
  enum class State { present, missing, malformed };
  State state = State::missing;
  double value = 0.0;

  static CellValue present_value(double v) {
    return {State::present, v};
  }
  bool present() const { return state == State::present; }
};

struct RawZipRow {
  std::string zip_code;
  std::string state_code;  // empty when unmapped or blank
  std::map<ZipField, CellValue> cells;
  std::size_t line = 0;  // 1-based data line for diagnostics
};

/// Read one ZIP-level CSV through a schema map. Malformed numeric cells
/// are flagged on the row, never fatal; structural CSV problems are.
/// Distinct errors: missing_file, empty_file, missing_column.
std::vector<RawZipRow> parse_zip_csv(const std::filesystem::path& path,
                                     const SchemaMap& schema);

/// Extrapolate observed counts to the full ZIP: each count is multiplied
/// by 100 / percent_covered. Throws Error{invalid_argument} when the
/// coverage is outside (0, 100].
std::pair<double, double> scale_by_coverage(double raw_existing,
                                            double raw_potential,
                                            double percent_covered);

struct CleanOptions {
  std::int64_t population_floor = 100;
};

/// Intersect the two sources on zip_code, validate, coverage-correct and
/// clamp. Output is sorted by zip_code ascending; drop reasons and clamp
/// counts land in provenance. Throws Error{no_survivors} naming the
/// dominant drop reason when nothing is retained.
Dataset clean_join(const std::vector<RawZipRow>& sunroof_rows,
                   const std::vector<RawZipRow>& acs_rows,
                   const CleanOptions& options = {});

struct VotingRow {
  std::string state_code;
  double republican_share = 0.0;
  double democratic_share = 0.0;
};

struct EnergyMixRow {
  std::string state_code;
  std::string fuel;
  double share = 0.0;
};

struct VotingSchema {
  std::string state_code = "state_code";
  std::string republican_share = "republican_share";
  std::string democratic_share = "democratic_share";
};

struct EnergyMixSchema {
  std::string state_code = "state_code";
  std::string fuel = "fuel";
  std::string share = "share";
};

std::vector<VotingRow> parse_voting_csv(const std::filesystem::path& path,
                                        const VotingSchema& schema = {});
std::vector<EnergyMixRow> parse_energy_mix_csv(
    const std::filesystem::path& path, const EnergyMixSchema& schema = {});

/// Build one StateRecord per state present in the ZIPs. Every mean is the
/// unweighted arithmetic mean over that state's records in ascending
/// zip_code order, skipping absent optional values per field. Overlay rows
/// for unknown states or with invalid shares are skipped with a warning.
Dataset aggregate_states(Dataset dataset,
                         const std::vector<VotingRow>& voting = {},
                         const std::vector<EnergyMixRow>& energy_mix = {});

// Canonical cleaned-dataset files. Column order is fixed and documented
// in the README; these CSVs round-trip through the ingest parser.
std::string data_by_zip_csv(const Dataset& dataset);
std::string data_by_state_csv(const Dataset& dataset);
std::vector<ZipRecord> read_data_by_zip_csv(const std::filesystem::path& path);
std::vector<StateRecord> read_data_by_state_csv(
    const std::filesystem::path& path);

/// Load a canonical workspace (data_by_zip.csv plus data_by_state.csv when
/// present) back into a Dataset.
Dataset load_canonical(const std::filesystem::path& zip_csv,
                       const std::optional<std::filesystem::path>& state_csv);

std::string provenance_json(const Provenance& provenance);

}  // namespace sitegrid
