#include "sitegrid/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sitegrid/error.hpp"

namespace sitegrid {
namespace {

using nlohmann::json;

void check_keys(const json& object, const char* where,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorCode::invalid_config,
                  std::string("unknown key '") + key + "' in " + where);
    }
  }
}

SortDirection direction_from_json(const json& value) {
  std::string name = value.get<std::string>();
  if (name == "descending") return SortDirection::descending;
  if (name == "ascending") return SortDirection::ascending;
  throw Error(ErrorCode::invalid_config,
              "direction must be 'ascending' or 'descending', got '" + name +
                  "'");
}

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& path) {
  std::filesystem::path p(path);
  return p.is_absolute() ? p : base / p;
}

void parse_schema_overrides(const json& object, const char* where,
                            SchemaMap& schema) {
  for (const auto& [key, value] : object.items()) {
    ZipField field = [&] {
      for (ZipField candidate :
           {ZipField::zip_code, ZipField::state_code,
            ZipField::existing_installs, ZipField::potential_installs,
            ZipField::energy_potential_total, ZipField::carbon_offset_total,
            ZipField::percent_covered, ZipField::median_income,
            ZipField::population, ZipField::race_share_black,
            ZipField::race_share_white, ZipField::race_share_asian,
            ZipField::race_share_hispanic}) {
        if (zip_field_name(candidate) == key) return candidate;
      }
      throw Error(ErrorCode::invalid_config,
                  std::string("unknown field '") + key + "' in " + where);
    }();
    ColumnSpec spec;
    if (value.is_string()) {
      spec.column = value.get<std::string>();
    } else if (value.is_object()) {
      check_keys(value, where, {"column", "scale"});
      spec.column = value.at("column").get<std::string>();
      if (value.contains("scale")) spec.scale = value.at("scale").get<double>();
    } else {
      throw Error(ErrorCode::invalid_config,
                  std::string(where) +
                      ": column mapping must be a string or an object");
    }
    schema[field] = spec;
  }
}

std::vector<StrategySpec> parse_strategies(const json& array) {
  if (!array.is_array() || array.empty()) {
    throw Error(ErrorCode::invalid_config,
                "strategies must be a nonempty array");
  }
  std::vector<StrategySpec> roster;
  for (const auto& entry : array) {
    check_keys(entry, "strategies[]",
               {"name", "kind", "attribute", "direction", "orderings",
                "terms"});
    StrategySpec spec;
    spec.name = entry.at("name").get<std::string>();
    std::string kind = entry.at("kind").get<std::string>();
    if (kind == "status_quo") {
      spec.kind = StrategySpec::Kind::status_quo;
    } else if (kind == "greedy") {
      spec.kind = StrategySpec::Kind::greedy;
      spec.ordering.attribute =
          attr_from_name(entry.at("attribute").get<std::string>());
      if (entry.contains("direction")) {
        spec.ordering.direction = direction_from_json(entry.at("direction"));
      }
    } else if (kind == "round_robin") {
      spec.kind = StrategySpec::Kind::round_robin;
      if (!entry.contains("orderings")) {
        spec.orderings = default_round_robin_orderings();
      } else {
        for (const auto& ordering : entry.at("orderings")) {
          check_keys(ordering, "orderings[]", {"attribute", "direction"});
          OrderingSpec o;
          o.attribute =
              attr_from_name(ordering.at("attribute").get<std::string>());
          if (ordering.contains("direction")) {
            o.direction = direction_from_json(ordering.at("direction"));
          }
          spec.orderings.push_back(o);
        }
      }
    } else if (kind == "weighted") {
      spec.kind = StrategySpec::Kind::weighted;
      for (const auto& term : entry.at("terms")) {
        check_keys(term, "terms[]", {"attribute", "direction", "weight"});
        WeightedTerm t;
        t.attribute = attr_from_name(term.at("attribute").get<std::string>());
        if (term.contains("direction")) {
          t.direction = direction_from_json(term.at("direction"));
        }
        if (term.contains("weight")) t.weight = term.at("weight").get<double>();
        spec.terms.push_back(t);
      }
    } else {
      throw Error(ErrorCode::invalid_config,
                  "unknown strategy kind '" + kind + "'");
    }
    roster.push_back(std::move(spec));
  }
  return roster;
}

std::vector<SplitSpec> parse_splits(const json& array) {
  if (!array.is_array()) {
    throw Error(ErrorCode::invalid_config, "splits must be an array");
  }
  std::vector<SplitSpec> splits;
  for (const auto& entry : array) {
    check_keys(entry, "splits[]", {"attribute", "side", "granularity"});
    SplitSpec spec;
    spec.attribute = attr_from_name(entry.at("attribute").get<std::string>());
    if (entry.contains("side")) {
      std::string side = entry.at("side").get<std::string>();
      if (side == "above") {
        spec.side = SplitSide::above;
      } else if (side == "below") {
        spec.side = SplitSide::below;
      } else {
        throw Error(ErrorCode::invalid_config,
                    "split side must be 'above' or 'below', got '" + side +
                        "'");
      }
    }
    if (entry.contains("granularity")) {
      spec.granularity = granularity_from_name(
          entry.at("granularity").get<std::string>());
    }
    splits.push_back(spec);
  }
  return splits;
}

}  // namespace

std::vector<std::int64_t> parse_grid(std::string_view text) {
  std::array<std::int64_t, 3> parts{};
  std::size_t part = 0;
  std::size_t start = 0;
  std::string owned(text);
  for (std::size_t i = 0; i <= owned.size(); ++i) {
    if (i == owned.size() || owned[i] == ':') {
      if (part >= parts.size()) {
        throw Error(ErrorCode::invalid_argument,
                    "grid must be start:step:end, got '" + owned + "'");
      }
      try {
        std::size_t consumed = 0;
        parts[part] = std::stoll(owned.substr(start, i - start), &consumed);
        if (consumed != i - start) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw Error(ErrorCode::invalid_argument,
                    "grid must be start:step:end, got '" + owned + "'");
      }
      ++part;
      start = i + 1;
    }
  }
  if (part != 3) {
    throw Error(ErrorCode::invalid_argument,
                "grid must be start:step:end, got '" + owned + "'");
  }
  auto [first, step, last] = parts;
  if (step <= 0 || last < first) {
    throw Error(ErrorCode::invalid_argument,
                "grid needs a positive step and end >= start");
  }
  std::vector<std::int64_t> grid;
  for (std::int64_t value = first; value <= last; value += step) {
    grid.push_back(value);
  }
  return grid;
}

RunConfig parse_run_config(const std::string& json_text,
                           const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_config,
                std::string("configuration is not valid JSON: ") + e.what());
  }

  RunConfig config;
  try {
    check_keys(doc, "configuration root",
               {"seed", "out", "inputs", "analysis", "strategies",
                "projection", "synth"});
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("out")) {
      config.out_dir = resolve(base_dir, doc.at("out").get<std::string>());
    }

    if (doc.contains("inputs")) {
      const json& inputs = doc.at("inputs");
      check_keys(inputs, "inputs",
                 {"sunroof", "acs", "voting", "energy_mix", "sunroof_columns",
                  "acs_columns", "voting_columns", "energy_mix_columns",
                  "population_floor"});
      if (inputs.contains("sunroof")) {
        config.sunroof_csv =
            resolve(base_dir, inputs.at("sunroof").get<std::string>());
      }
      if (inputs.contains("acs")) {
        config.acs_csv = resolve(base_dir, inputs.at("acs").get<std::string>());
      }
      if (inputs.contains("voting")) {
        config.voting_csv =
            resolve(base_dir, inputs.at("voting").get<std::string>());
      }
      if (inputs.contains("energy_mix")) {
        config.energy_mix_csv =
            resolve(base_dir, inputs.at("energy_mix").get<std::string>());
      }
      if (inputs.contains("sunroof_columns")) {
        parse_schema_overrides(inputs.at("sunroof_columns"), "sunroof_columns",
                               config.sunroof_schema);
      }
      if (inputs.contains("acs_columns")) {
        parse_schema_overrides(inputs.at("acs_columns"), "acs_columns",
                               config.acs_schema);
      }
      if (inputs.contains("voting_columns")) {
        const json& cols = inputs.at("voting_columns");
        check_keys(cols, "voting_columns",
                   {"state_code", "republican_share", "democratic_share"});
        if (cols.contains("state_code")) {
          config.voting_schema.state_code =
              cols.at("state_code").get<std::string>();
        }
        if (cols.contains("republican_share")) {
          config.voting_schema.republican_share =
              cols.at("republican_share").get<std::string>();
        }
        if (cols.contains("democratic_share")) {
          config.voting_schema.democratic_share =
              cols.at("democratic_share").get<std::string>();
        }
      }
      if (inputs.contains("energy_mix_columns")) {
        const json& cols = inputs.at("energy_mix_columns");
        check_keys(cols, "energy_mix_columns", {"state_code", "fuel", "share"});
        if (cols.contains("state_code")) {
          config.energy_mix_schema.state_code =
              cols.at("state_code").get<std::string>();
        }
        if (cols.contains("fuel")) {
          config.energy_mix_schema.fuel = cols.at("fuel").get<std::string>();
        }
        if (cols.contains("share")) {
          config.energy_mix_schema.share = cols.at("share").get<std::string>();
        }
      }
      if (inputs.contains("population_floor")) {
        config.clean.population_floor =
            inputs.at("population_floor").get<std::int64_t>();
      }
    }

    if (doc.contains("analysis")) {
      const json& analysis = doc.at("analysis");
      check_keys(analysis, "analysis",
                 {"granularity", "weighting", "quadrant_rule",
                  "quantile_count", "fit_degree", "quantile_key", "fit_x",
                  "fit_y", "splits"});
      if (analysis.contains("granularity")) {
        config.granularity = granularity_from_name(
            analysis.at("granularity").get<std::string>());
      }
      if (analysis.contains("weighting")) {
        config.weighting =
            weighting_from_name(analysis.at("weighting").get<std::string>());
      }
      if (analysis.contains("quadrant_rule")) {
        std::string rule = analysis.at("quadrant_rule").get<std::string>();
        if (rule == "mean") {
          config.quadrant_rule = SplitRule::mean;
        } else if (rule == "median") {
          config.quadrant_rule = SplitRule::median;
        } else {
          throw Error(ErrorCode::invalid_config,
                      "quadrant_rule must be 'mean' or 'median', got '" +
                          rule + "'");
        }
      }
      if (analysis.contains("quantile_count")) {
        config.quantile_count =
            analysis.at("quantile_count").get<std::size_t>();
      }
      if (analysis.contains("fit_degree")) {
        config.fit_degree = analysis.at("fit_degree").get<std::size_t>();
      }
      if (analysis.contains("quantile_key")) {
        config.quantile_key =
            attr_from_name(analysis.at("quantile_key").get<std::string>());
      }
      if (analysis.contains("fit_x")) {
        config.fit_x = attr_from_name(analysis.at("fit_x").get<std::string>());
      }
      if (analysis.contains("fit_y")) {
        config.fit_y = attr_from_name(analysis.at("fit_y").get<std::string>());
      }
      if (analysis.contains("splits")) {
        config.splits = parse_splits(analysis.at("splits"));
      }
    }

    if (doc.contains("strategies")) {
      config.strategies = parse_strategies(doc.at("strategies"));
    }

    if (doc.contains("projection")) {
      const json& projection = doc.at("projection");
      check_keys(projection, "projection",
                 {"grid", "multipliers", "baseline", "post_equity_strategy",
                  "parallel"});
      if (projection.contains("grid")) {
        const json& grid = projection.at("grid");
        if (grid.is_string()) {
          config.n_grid = parse_grid(grid.get<std::string>());
        } else if (grid.is_array()) {
          config.n_grid = grid.get<std::vector<std::int64_t>>();
        } else {
          throw Error(ErrorCode::invalid_config,
                      "projection grid must be a string or an array");
        }
      }
      if (projection.contains("multipliers")) {
        config.scenario_multipliers =
            projection.at("multipliers").get<std::vector<double>>();
      }
      if (projection.contains("baseline")) {
        config.baseline = projection.at("baseline").get<std::string>();
      }
      if (projection.contains("post_equity_strategy")) {
        config.post_equity_strategy =
            projection.at("post_equity_strategy").get<std::string>();
      }
      if (projection.contains("parallel")) {
        config.parallel_projection = projection.at("parallel").get<bool>();
      }
    }

    if (doc.contains("synth")) {
      const json& synth = doc.at("synth");
      check_keys(synth, "synth", {"zips", "states", "profile"});
      if (synth.contains("zips")) {
        config.synth.zip_count = synth.at("zips").get<std::size_t>();
      }
      if (synth.contains("states")) {
        config.synth.state_count = synth.at("states").get<std::size_t>();
      }
      if (synth.contains("profile")) {
        config.synth.profile =
            synth_profile_from_name(synth.at("profile").get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_config,
                std::string("configuration error: ") + e.what());
  }

  validate_config(config);
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::missing_file,
                "cannot open config " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config(buffer.str(), path.parent_path());
}

void validate_config(const RunConfig& config) {
  if (config.quantile_count < 2) {
    throw Error(ErrorCode::invalid_config, "quantile_count must be >= 2");
  }
  if (config.fit_degree < 1) {
    throw Error(ErrorCode::invalid_config, "fit_degree must be >= 1");
  }
  if (config.strategies.empty()) {
    throw Error(ErrorCode::invalid_config, "strategy roster is empty");
  }
  std::set<std::string> names;
  for (const auto& spec : config.strategies) {
    if (spec.name.empty()) {
      throw Error(ErrorCode::invalid_config, "strategy with empty name");
    }
    if (!names.insert(spec.name).second) {
      throw Error(ErrorCode::invalid_config,
                  "duplicate strategy name '" + spec.name + "'");
    }
    if (spec.kind == StrategySpec::Kind::round_robin &&
        spec.orderings.empty()) {
      throw Error(ErrorCode::invalid_config,
                  "round robin strategy '" + spec.name + "' has no orderings");
    }
    if (spec.kind == StrategySpec::Kind::weighted && spec.terms.empty()) {
      throw Error(ErrorCode::invalid_config,
                  "weighted strategy '" + spec.name + "' has no terms");
    }
  }
  if (!names.count(config.baseline)) {
    throw Error(ErrorCode::invalid_config,
                "baseline strategy '" + config.baseline +
                    "' is not in the roster");
  }
  if (!names.count(config.post_equity_strategy)) {
    throw Error(ErrorCode::invalid_config,
                "post_equity_strategy '" + config.post_equity_strategy +
                    "' is not in the roster");
  }

  if (config.n_grid.empty() || config.n_grid.front() != 0) {
    throw Error(ErrorCode::invalid_config, "budget grid must start at 0");
  }
  for (std::size_t i = 1; i < config.n_grid.size(); ++i) {
    if (config.n_grid[i] <= config.n_grid[i - 1]) {
      throw Error(ErrorCode::invalid_config,
                  "budget grid must be strictly increasing");
    }
  }
  for (double multiplier : config.scenario_multipliers) {
    if (multiplier < 1.0) {
      throw Error(ErrorCode::invalid_config,
                  "scenario multipliers must be >= 1");
    }
  }

  std::vector<std::filesystem::path> paths;
  if (!config.sunroof_csv.empty()) paths.push_back(config.sunroof_csv);
  if (!config.acs_csv.empty()) paths.push_back(config.acs_csv);
  if (config.voting_csv) paths.push_back(*config.voting_csv);
  if (config.energy_mix_csv) paths.push_back(*config.energy_mix_csv);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      if (paths[i] == paths[j]) {
        throw Error(ErrorCode::invalid_config,
                    "input paths must be distinct: " + paths[i].string());
      }
    }
  }

  if (config.synth.zip_count == 0) {
    throw Error(ErrorCode::invalid_config, "synth zip count must be >= 1");
  }
}

}  // namespace sitegrid
