#include "sitegrid/dataset.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>

#include "json.hpp"
#include "sitegrid/csv.hpp"
#include "sitegrid/error.hpp"

namespace sitegrid {
namespace {

constexpr double kMixSumTolerance = 1e-9;

constexpr std::array<ZipField, 13> kAllZipFields{
    ZipField::zip_code,
    ZipField::state_code,
    ZipField::existing_installs,
    ZipField::potential_installs,
    ZipField::energy_potential_total,
    ZipField::carbon_offset_total,
    ZipField::percent_covered,
    ZipField::median_income,
    ZipField::population,
    ZipField::race_share_black,
    ZipField::race_share_white,
    ZipField::race_share_asian,
    ZipField::race_share_hispanic,
};

std::string trim(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return std::string(text);
}

/// Trim, and left-pad all-digit codes shorter than 5 (ZIPs exported
/// through numeric columns lose leading zeros).
std::string normalize_zip(std::string_view raw) {
  std::string zip = trim(raw);
  bool digits = !zip.empty() &&
                std::all_of(zip.begin(), zip.end(), [](unsigned char c) {
                  return std::isdigit(c) != 0;
                });
  if (digits && zip.size() < 5) {
    zip.insert(zip.begin(), 5 - zip.size(), '0');
  }
  return zip;
}

bool valid_zip_code(const std::string& zip) {
  return zip.size() == 5 &&
         std::all_of(zip.begin(), zip.end(), [](unsigned char c) {
           return std::isdigit(c) != 0;
         });
}

std::string normalize_state(std::string_view raw) {
  std::string state = trim(raw);
  for (char& c : state) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return state;
}

bool valid_state_code(const std::string& state) {
  return state.size() == 2 &&
         std::all_of(state.begin(), state.end(), [](unsigned char c) {
           return std::isupper(c) != 0;
         });
}

/// Keep the first row per ZIP; count later duplicates.
std::map<std::string, const RawZipRow*> dedup_rows(
    const std::vector<RawZipRow>& rows, std::size_t& duplicates) {
  std::map<std::string, const RawZipRow*> by_zip;
  duplicates = 0;
  for (const auto& row : rows) {
    auto [it, inserted] = by_zip.emplace(row.zip_code, &row);
    if (!inserted) ++duplicates;
  }
  return by_zip;
}

const CellValue& cell(const RawZipRow& row, ZipField field) {
  static const CellValue kMissing{};
  auto it = row.cells.find(field);
  return it == row.cells.end() ? kMissing : it->second;
}

}  // namespace

std::string_view zip_field_name(ZipField field) {
  switch (field) {
    case ZipField::zip_code: return "zip_code";
    case ZipField::state_code: return "state_code";
    case ZipField::existing_installs: return "existing_installs";
    case ZipField::potential_installs: return "potential_installs";
    case ZipField::energy_potential_total: return "energy_potential_total";
    case ZipField::carbon_offset_total: return "carbon_offset_total";
    case ZipField::percent_covered: return "percent_covered";
    case ZipField::median_income: return "median_income";
    case ZipField::population: return "population";
    case ZipField::race_share_black: return "race_share_black";
    case ZipField::race_share_white: return "race_share_white";
    case ZipField::race_share_asian: return "race_share_asian";
    case ZipField::race_share_hispanic: return "race_share_hispanic";
  }
  return "unknown";
}

SchemaMap sunroof_schema_canonical() {
  SchemaMap schema;
  for (ZipField field :
       {ZipField::zip_code, ZipField::state_code, ZipField::existing_installs,
        ZipField::potential_installs, ZipField::energy_potential_total,
        ZipField::carbon_offset_total, ZipField::percent_covered}) {
    schema[field] = ColumnSpec{std::string(zip_field_name(field)), 1.0};
  }
  return schema;
}

SchemaMap acs_schema_canonical() {
  SchemaMap schema;
  for (ZipField field :
       {ZipField::zip_code, ZipField::median_income, ZipField::population,
        ZipField::race_share_black, ZipField::race_share_white,
        ZipField::race_share_asian, ZipField::race_share_hispanic}) {
    schema[field] = ColumnSpec{std::string(zip_field_name(field)), 1.0};
  }
  return schema;
}

std::vector<RawZipRow> parse_zip_csv(const std::filesystem::path& path,
                                     const SchemaMap& schema) {
  if (!schema.count(ZipField::zip_code)) {
    throw Error(ErrorCode::invalid_argument,
                "schema maps no zip_code column");
  }
  csv::Table table = csv::read_file(path);

  std::map<ZipField, std::size_t> indices;
  for (const auto& [field, spec] : schema) {
    auto index = table.column(spec.column);
    if (!index) {
      throw Error(ErrorCode::missing_column,
                  path.string() + ": missing column '" + spec.column +
                      "' (mapped to " + std::string(zip_field_name(field)) +
                      ")");
    }
    indices[field] = *index;
  }

  std::vector<RawZipRow> rows;
  rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& record = table.rows[r];
    RawZipRow row;
    row.line = r + 1;
    row.zip_code = normalize_zip(record[indices[ZipField::zip_code]]);
    for (const auto& [field, index] : indices) {
      if (field == ZipField::zip_code) continue;
      if (field == ZipField::state_code) {
        row.state_code = normalize_state(record[index]);
        continue;
      }
      const std::string& text = record[index];
      CellValue value;
      if (trim(text).empty()) {
        value.state = CellValue::State::missing;
      } else if (auto parsed = csv::parse_double(text)) {
        value = CellValue::present_value(*parsed * schema.at(field).scale);
      } else {
        value.state = CellValue::State::malformed;
      }
      row.cells[field] = value;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::pair<double, double> scale_by_coverage(double raw_existing,
                                            double raw_potential,
                                            double percent_covered) {
  if (!(percent_covered > 0.0) || percent_covered > 100.0) {
    throw Error(ErrorCode::invalid_argument,
                "percent_covered must be in (0, 100], got " +
                    csv::format_double(percent_covered));
  }
  double factor = 100.0 / percent_covered;
  return {raw_existing * factor, raw_potential * factor};
}

Dataset clean_join(const std::vector<RawZipRow>& sunroof_rows,
                   const std::vector<RawZipRow>& acs_rows,
                   const CleanOptions& options) {
  Dataset dataset;
  Provenance& prov = dataset.provenance;
  prov.sunroof.rows_parsed = sunroof_rows.size();
  prov.acs.rows_parsed = acs_rows.size();

  auto sunroof = dedup_rows(sunroof_rows, prov.sunroof.duplicate_zips);
  auto acs = dedup_rows(acs_rows, prov.acs.duplicate_zips);

  auto drop = [&prov](const char* reason) { ++prov.drops[reason]; };

  for (const auto& [zip_code, sun_row] : sunroof) {
    auto acs_it = acs.find(zip_code);
    if (acs_it == acs.end()) continue;
    ++prov.intersection_size;
    const RawZipRow& acs_row = *acs_it->second;

    if (!valid_zip_code(zip_code)) {
      drop("invalid_zip_code");
      continue;
    }
    if (!valid_state_code(sun_row->state_code)) {
      drop("invalid_state_code");
      continue;
    }

    const CellValue& existing = cell(*sun_row, ZipField::existing_installs);
    const CellValue& potential = cell(*sun_row, ZipField::potential_installs);
    const CellValue& energy = cell(*sun_row, ZipField::energy_potential_total);
    const CellValue& carbon = cell(*sun_row, ZipField::carbon_offset_total);
    if (!existing.present() || existing.value < 0.0 || !potential.present() ||
        potential.value < 0.0 || !energy.present() || energy.value < 0.0 ||
        !carbon.present() || carbon.value < 0.0) {
      drop("invalid_sunroof_field");
      continue;
    }

    const CellValue& coverage = cell(*sun_row, ZipField::percent_covered);
    if (!coverage.present() || !(coverage.value > 0.0) ||
        coverage.value > 100.0) {
      drop("invalid_coverage");
      continue;
    }

    const CellValue& population = cell(acs_row, ZipField::population);
    bool population_integral =
        population.present() && std::floor(population.value) == population.value;
    if (!population_integral || population.value < 0.0 ||
        population.value > 1e12) {
      drop("invalid_population");
      continue;
    }
    if (population.value < static_cast<double>(options.population_floor)) {
      drop("population_below_floor");
      continue;
    }

    ZipRecord record;
    record.zip_code = zip_code;
    record.state_code = sun_row->state_code;
    double factor = 100.0 / coverage.value;
    record.existing_installs = existing.value * factor;
    record.potential_installs = potential.value * factor;
    record.energy_potential_total = energy.value * factor;
    record.carbon_offset_total = carbon.value * factor;
    record.percent_covered = 100.0;
    record.population = static_cast<std::int64_t>(population.value);

    if (record.existing_installs > record.potential_installs) {
      record.existing_installs = record.potential_installs;
      ++prov.clamped_existing;
    }

    auto take_optional = [&prov, &acs_row](ZipField field, double lo,
                                           double hi) -> std::optional<double> {
      const CellValue& value = cell(acs_row, field);
      if (value.state == CellValue::State::missing) return std::nullopt;
      if (value.state == CellValue::State::malformed || value.value < lo ||
          value.value > hi) {
        ++prov.invalid_optional[std::string(zip_field_name(field))];
        return std::nullopt;
      }
      return value.value;
    };
    record.median_income = take_optional(
        ZipField::median_income, std::nextafter(0.0, 1.0),
        std::numeric_limits<double>::max());
    record.race_share_black = take_optional(ZipField::race_share_black, 0, 1);
    record.race_share_white = take_optional(ZipField::race_share_white, 0, 1);
    record.race_share_asian = take_optional(ZipField::race_share_asian, 0, 1);
    record.race_share_hispanic =
        take_optional(ZipField::race_share_hispanic, 0, 1);

    dataset.zips.push_back(std::move(record));
    ++prov.retained;
  }

  if (dataset.zips.empty()) {
    std::string dominant = "empty_intersection";
    std::size_t worst = 0;
    for (const auto& [reason, count] : prov.drops) {
      if (count > worst) {
        worst = count;
        dominant = reason;
      }
    }
    throw Error(ErrorCode::no_survivors,
                "no records survived cleaning; dominant drop reason: " +
                    dominant + " (" + std::to_string(worst) + " of " +
                    std::to_string(prov.intersection_size) + ")");
  }
  // Map iteration already yields ascending zip_code order.
  return dataset;
}

std::vector<VotingRow> parse_voting_csv(const std::filesystem::path& path,
                                        const VotingSchema& schema) {
  csv::Table table = csv::read_file(path);
  auto state_col = table.column(schema.state_code);
  auto rep_col = table.column(schema.republican_share);
  auto dem_col = table.column(schema.democratic_share);
  for (const auto& [index, name] :
       {std::pair{state_col, schema.state_code},
        std::pair{rep_col, schema.republican_share},
        std::pair{dem_col, schema.democratic_share}}) {
    if (!index) {
      throw Error(ErrorCode::missing_column,
                  path.string() + ": missing column '" + name + "'");
    }
  }
  std::vector<VotingRow> rows;
  for (const auto& record : table.rows) {
    VotingRow row;
    row.state_code = normalize_state(record[*state_col]);
    auto rep = csv::parse_double(record[*rep_col]);
    auto dem = csv::parse_double(record[*dem_col]);
    row.republican_share = rep.value_or(-1.0);
    row.democratic_share = dem.value_or(-1.0);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<EnergyMixRow> parse_energy_mix_csv(
    const std::filesystem::path& path, const EnergyMixSchema& schema) {
  csv::Table table = csv::read_file(path);
  auto state_col = table.column(schema.state_code);
  auto fuel_col = table.column(schema.fuel);
  auto share_col = table.column(schema.share);
  for (const auto& [index, name] : {std::pair{state_col, schema.state_code},
                                    std::pair{fuel_col, schema.fuel},
                                    std::pair{share_col, schema.share}}) {
    if (!index) {
      throw Error(ErrorCode::missing_column,
                  path.string() + ": missing column '" + name + "'");
    }
  }
  std::vector<EnergyMixRow> rows;
  for (const auto& record : table.rows) {
    EnergyMixRow row;
    row.state_code = normalize_state(record[*state_col]);
    row.fuel = trim(record[*fuel_col]);
    row.share = csv::parse_double(record[*share_col]).value_or(-1.0);
    rows.push_back(std::move(row));
  }
  return rows;
}

Dataset aggregate_states(Dataset dataset,
                         const std::vector<VotingRow>& voting,
                         const std::vector<EnergyMixRow>& energy_mix) {
  dataset.states.clear();
  auto warn = [&dataset](std::string message) {
    dataset.provenance.warnings.push_back(std::move(message));
  };

  // dataset.zips is sorted by zip_code, so per-state accumulation below
  // visits members in ascending zip_code order.
  std::map<std::string, StateRecord> states;
  struct OptionalSums {
    double income = 0, population = 0, black = 0, white = 0, asian = 0,
           hispanic = 0;
    std::size_t n_income = 0, n_population = 0, n_black = 0, n_white = 0,
                n_asian = 0, n_hispanic = 0;
  };
  std::map<std::string, OptionalSums> sums;

  for (const auto& zip : dataset.zips) {
    StateRecord& state = states[zip.state_code];
    state.state_code = zip.state_code;
    ++state.zip_count;
    state.mean_existing_installs += zip.existing_installs;
    state.mean_potential_installs += zip.potential_installs;
    state.mean_energy_potential_total += zip.energy_potential_total;
    state.mean_carbon_offset_total += zip.carbon_offset_total;
    state.mean_percent_covered += zip.percent_covered;
    OptionalSums& extra = sums[zip.state_code];
    if (zip.median_income) {
      extra.income += *zip.median_income;
      ++extra.n_income;
    }
    if (zip.population) {
      extra.population += static_cast<double>(*zip.population);
      ++extra.n_population;
    }
    if (zip.race_share_black) {
      extra.black += *zip.race_share_black;
      ++extra.n_black;
    }
    if (zip.race_share_white) {
      extra.white += *zip.race_share_white;
      ++extra.n_white;
    }
    if (zip.race_share_asian) {
      extra.asian += *zip.race_share_asian;
      ++extra.n_asian;
    }
    if (zip.race_share_hispanic) {
      extra.hispanic += *zip.race_share_hispanic;
      ++extra.n_hispanic;
    }
  }

  for (auto& [code, state] : states) {
    double n = static_cast<double>(state.zip_count);
    state.mean_existing_installs /= n;
    state.mean_potential_installs /= n;
    state.mean_energy_potential_total /= n;
    state.mean_carbon_offset_total /= n;
    state.mean_percent_covered /= n;
    const OptionalSums& extra = sums[code];
    if (extra.n_income) {
      state.mean_median_income = extra.income / extra.n_income;
    }
    if (extra.n_population) {
      state.mean_population = extra.population / extra.n_population;
    }
    if (extra.n_black) state.mean_race_share_black = extra.black / extra.n_black;
    if (extra.n_white) state.mean_race_share_white = extra.white / extra.n_white;
    if (extra.n_asian) state.mean_race_share_asian = extra.asian / extra.n_asian;
    if (extra.n_hispanic) {
      state.mean_race_share_hispanic = extra.hispanic / extra.n_hispanic;
    }
  }

  for (const auto& row : voting) {
    auto it = states.find(row.state_code);
    if (it == states.end()) {
      warn("voting row for unknown state " + row.state_code + ", skipped");
      continue;
    }
    bool in_range = row.republican_share >= 0.0 &&
                    row.republican_share <= 1.0 &&
                    row.democratic_share >= 0.0 && row.democratic_share <= 1.0;
    if (!in_range ||
        row.republican_share + row.democratic_share > 1.0 + kMixSumTolerance) {
      warn("invalid vote shares for state " + row.state_code + ", skipped");
      continue;
    }
    it->second.republican_vote_share = row.republican_share;
    it->second.democratic_vote_share = row.democratic_share;
  }

  std::map<std::string, std::map<std::string, double>> mixes;
  std::set<std::string> bad_mix;
  for (const auto& row : energy_mix) {
    if (!states.count(row.state_code)) {
      warn("energy mix row for unknown state " + row.state_code + ", skipped");
      continue;
    }
    if (row.fuel.empty() || row.share < 0.0 || row.share > 1.0 ||
        !mixes[row.state_code].emplace(row.fuel, row.share).second) {
      bad_mix.insert(row.state_code);
    }
  }
  for (const auto& [code, mix] : mixes) {
    if (bad_mix.count(code)) {
      warn("invalid energy mix rows for state " + code + ", mix skipped");
      continue;
    }
    double sum = 0.0;
    for (const auto& [fuel, share] : mix) sum += share;
    if (std::abs(sum - 1.0) > kMixSumTolerance) {
      warn("energy mix for state " + code + " sums to " +
           csv::format_double(sum) + ", mix skipped");
      continue;
    }
    states[code].generation_mix = mix;
  }

  dataset.states.reserve(states.size());
  for (auto& [code, state] : states) {
    dataset.states.push_back(std::move(state));
  }
  return dataset;
}

namespace {

std::string field_or_empty(const std::optional<double>& value) {
  return value ? csv::format_double(*value) : std::string();
}

}  // namespace

std::string data_by_zip_csv(const Dataset& dataset) {
  csv::Table table;
  for (ZipField field : kAllZipFields) {
    table.header.emplace_back(zip_field_name(field));
  }
  for (const auto& zip : dataset.zips) {
    std::vector<std::string> row;
    row.push_back(zip.zip_code);
    row.push_back(zip.state_code);
    row.push_back(csv::format_double(zip.existing_installs));
    row.push_back(csv::format_double(zip.potential_installs));
    row.push_back(csv::format_double(zip.energy_potential_total));
    row.push_back(csv::format_double(zip.carbon_offset_total));
    row.push_back(csv::format_double(zip.percent_covered));
    row.push_back(field_or_empty(zip.median_income));
    row.push_back(zip.population ? csv::format_int(*zip.population)
                                 : std::string());
    row.push_back(field_or_empty(zip.race_share_black));
    row.push_back(field_or_empty(zip.race_share_white));
    row.push_back(field_or_empty(zip.race_share_asian));
    row.push_back(field_or_empty(zip.race_share_hispanic));
    table.rows.push_back(std::move(row));
  }
  return csv::to_string(table);
}

std::string data_by_state_csv(const Dataset& dataset) {
  std::set<std::string> fuels;
  for (const auto& state : dataset.states) {
    for (const auto& [fuel, share] : state.generation_mix) fuels.insert(fuel);
  }

  csv::Table table;
  table.header = {"state_code",
                  "zip_count",
                  "mean_existing_installs",
                  "mean_potential_installs",
                  "mean_energy_potential_total",
                  "mean_carbon_offset_total",
                  "mean_percent_covered",
                  "mean_median_income",
                  "mean_population",
                  "mean_race_share_black",
                  "mean_race_share_white",
                  "mean_race_share_asian",
                  "mean_race_share_hispanic",
                  "republican_vote_share",
                  "democratic_vote_share"};
  for (const auto& fuel : fuels) table.header.push_back("mix_" + fuel);

  for (const auto& state : dataset.states) {
    std::vector<std::string> row;
    row.push_back(state.state_code);
    row.push_back(csv::format_int(state.zip_count));
    row.push_back(csv::format_double(state.mean_existing_installs));
    row.push_back(csv::format_double(state.mean_potential_installs));
    row.push_back(csv::format_double(state.mean_energy_potential_total));
    row.push_back(csv::format_double(state.mean_carbon_offset_total));
    row.push_back(csv::format_double(state.mean_percent_covered));
    row.push_back(field_or_empty(state.mean_median_income));
    row.push_back(field_or_empty(state.mean_population));
    row.push_back(field_or_empty(state.mean_race_share_black));
    row.push_back(field_or_empty(state.mean_race_share_white));
    row.push_back(field_or_empty(state.mean_race_share_asian));
    row.push_back(field_or_empty(state.mean_race_share_hispanic));
    row.push_back(field_or_empty(state.republican_vote_share));
    row.push_back(field_or_empty(state.democratic_vote_share));
    for (const auto& fuel : fuels) {
      auto it = state.generation_mix.find(fuel);
      row.push_back(it == state.generation_mix.end()
                        ? std::string()
                        : csv::format_double(it->second));
    }
    table.rows.push_back(std::move(row));
  }
  return csv::to_string(table);
}

namespace {

double require_double(const csv::Table& table, std::size_t row,
                      std::size_t col, const std::filesystem::path& path) {
  auto value = csv::parse_double(table.rows[row][col]);
  if (!value) {
    throw Error(ErrorCode::malformed_csv,
                path.string() + ":record " + std::to_string(row + 2) +
                    ": non-numeric value in column '" + table.header[col] +
                    "'");
  }
  return *value;
}

std::optional<double> optional_double(const csv::Table& table, std::size_t row,
                                      std::size_t col,
                                      const std::filesystem::path& path) {
  if (table.rows[row][col].empty()) return std::nullopt;
  return require_double(table, row, col, path);
}

std::size_t require_column(const csv::Table& table, std::string_view name,
                           const std::filesystem::path& path) {
  auto index = table.column(name);
  if (!index) {
    throw Error(ErrorCode::missing_column,
                path.string() + ": missing column '" + std::string(name) +
                    "'");
  }
  return *index;
}

}  // namespace

std::vector<ZipRecord> read_data_by_zip_csv(
    const std::filesystem::path& path) {
  csv::Table table = csv::read_file(path);
  std::map<ZipField, std::size_t> cols;
  for (ZipField field : kAllZipFields) {
    cols[field] = require_column(table, zip_field_name(field), path);
  }

  std::vector<ZipRecord> zips;
  zips.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    ZipRecord zip;
    zip.zip_code = table.rows[r][cols[ZipField::zip_code]];
    zip.state_code = table.rows[r][cols[ZipField::state_code]];
    zip.existing_installs =
        require_double(table, r, cols[ZipField::existing_installs], path);
    zip.potential_installs =
        require_double(table, r, cols[ZipField::potential_installs], path);
    zip.energy_potential_total =
        require_double(table, r, cols[ZipField::energy_potential_total], path);
    zip.carbon_offset_total =
        require_double(table, r, cols[ZipField::carbon_offset_total], path);
    zip.percent_covered =
        require_double(table, r, cols[ZipField::percent_covered], path);
    zip.median_income =
        optional_double(table, r, cols[ZipField::median_income], path);
    if (auto population =
            optional_double(table, r, cols[ZipField::population], path)) {
      zip.population = static_cast<std::int64_t>(*population);
    }
    zip.race_share_black =
        optional_double(table, r, cols[ZipField::race_share_black], path);
    zip.race_share_white =
        optional_double(table, r, cols[ZipField::race_share_white], path);
    zip.race_share_asian =
        optional_double(table, r, cols[ZipField::race_share_asian], path);
    zip.race_share_hispanic =
        optional_double(table, r, cols[ZipField::race_share_hispanic], path);
    zips.push_back(std::move(zip));
  }
  return zips;
}

std::vector<StateRecord> read_data_by_state_csv(
    const std::filesystem::path& path) {
  csv::Table table = csv::read_file(path);
  std::size_t state_col = require_column(table, "state_code", path);
  std::size_t count_col = require_column(table, "zip_count", path);
  std::map<std::string, std::size_t> mean_cols;
  for (std::string_view name :
       {"mean_existing_installs", "mean_potential_installs",
        "mean_energy_potential_total", "mean_carbon_offset_total",
        "mean_percent_covered", "mean_median_income", "mean_population",
        "mean_race_share_black", "mean_race_share_white",
        "mean_race_share_asian", "mean_race_share_hispanic",
        "republican_vote_share", "democratic_vote_share"}) {
    mean_cols[std::string(name)] = require_column(table, name, path);
  }
  std::vector<std::pair<std::string, std::size_t>> mix_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c].rfind("mix_", 0) == 0) {
      mix_cols.emplace_back(table.header[c].substr(4), c);
    }
  }

  std::vector<StateRecord> states;
  states.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    StateRecord state;
    state.state_code = table.rows[r][state_col];
    state.zip_count = static_cast<std::int64_t>(
        require_double(table, r, count_col, path));
    state.mean_existing_installs =
        require_double(table, r, mean_cols["mean_existing_installs"], path);
    state.mean_potential_installs =
        require_double(table, r, mean_cols["mean_potential_installs"], path);
    state.mean_energy_potential_total = require_double(
        table, r, mean_cols["mean_energy_potential_total"], path);
    state.mean_carbon_offset_total =
        require_double(table, r, mean_cols["mean_carbon_offset_total"], path);
    state.mean_percent_covered =
        require_double(table, r, mean_cols["mean_percent_covered"], path);
    state.mean_median_income =
        optional_double(table, r, mean_cols["mean_median_income"], path);
    state.mean_population =
        optional_double(table, r, mean_cols["mean_population"], path);
    state.mean_race_share_black =
        optional_double(table, r, mean_cols["mean_race_share_black"], path);
    state.mean_race_share_white =
        optional_double(table, r, mean_cols["mean_race_share_white"], path);
    state.mean_race_share_asian =
        optional_double(table, r, mean_cols["mean_race_share_asian"], path);
    state.mean_race_share_hispanic =
        optional_double(table, r, mean_cols["mean_race_share_hispanic"], path);
    state.republican_vote_share =
        optional_double(table, r, mean_cols["republican_vote_share"], path);
    state.democratic_vote_share =
        optional_double(table, r, mean_cols["democratic_vote_share"], path);
    for (const auto& [fuel, col] : mix_cols) {
      if (auto share = optional_double(table, r, col, path)) {
        state.generation_mix[fuel] = *share;
      }
    }
    states.push_back(std::move(state));
  }
  return states;
}

Dataset load_canonical(const std::filesystem::path& zip_csv,
                       const std::optional<std::filesystem::path>& state_csv) {
  Dataset dataset;
  dataset.zips = read_data_by_zip_csv(zip_csv);
  std::sort(dataset.zips.begin(), dataset.zips.end(),
            [](const ZipRecord& a, const ZipRecord& b) {
              return a.zip_code < b.zip_code;
            });
  for (std::size_t i = 1; i < dataset.zips.size(); ++i) {
    if (dataset.zips[i].zip_code == dataset.zips[i - 1].zip_code) {
      throw Error(ErrorCode::malformed_csv,
                  zip_csv.string() + ": duplicate zip_code " +
                      dataset.zips[i].zip_code);
    }
  }
  if (state_csv) {
    dataset.states = read_data_by_state_csv(*state_csv);
    std::sort(dataset.states.begin(), dataset.states.end(),
              [](const StateRecord& a, const StateRecord& b) {
                return a.state_code < b.state_code;
              });
  }
  return dataset;
}

std::string provenance_json(const Provenance& provenance) {
  nlohmann::ordered_json doc;
  auto source = [](const SourceInfo& info) {
    nlohmann::ordered_json out;
    out["path"] = info.path;
    out["rows_parsed"] = info.rows_parsed;
    out["duplicate_zips"] = info.duplicate_zips;
    return out;
  };
  doc["sources"]["sunroof"] = source(provenance.sunroof);
  doc["sources"]["acs"] = source(provenance.acs);
  if (provenance.voting) doc["sources"]["voting"] = source(*provenance.voting);
  if (provenance.energy_mix) {
    doc["sources"]["energy_mix"] = source(*provenance.energy_mix);
  }
  doc["intersection_size"] = provenance.intersection_size;
  doc["retained"] = provenance.retained;
  doc["drops"] = provenance.drops;
  doc["clamped_existing"] = provenance.clamped_existing;
  doc["invalid_optional"] = provenance.invalid_optional;
  doc["warnings"] = provenance.warnings;
  return doc.dump(2) + "\n";
}

}  // namespace sitegrid
