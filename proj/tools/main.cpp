#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sitegrid/config.hpp"
#include "sitegrid/error.hpp"
#include "sitegrid/report.hpp"

namespace {

int log_verbosity() {
  const char* env = std::getenv("SITEGRID_LOG");
  if (env == nullptr) return 0;
  std::string value(env);
  if (value.empty() || value == "0" || value == "off") return 0;
  if (value == "2" || value == "debug") return 2;
  return 1;
}

struct Flags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string grid;
  std::vector<std::string> strategies;
  std::string baseline;
  std::string granularity;
  std::string weighting;
};

void add_common_flags(CLI::App* command, Flags& flags) {
  command->add_option("--config", flags.config_path,
                      "JSON configuration file");
  command->add_option("--out", flags.out_dir, "output directory");
  command->add_option("--seed", flags.seed, "RNG seed")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  command->add_option("--grid", flags.grid, "budget grid as start:step:end");
  command->add_option("--strategies", flags.strategies,
                      "comma-separated strategy names to keep from the roster")
      ->delimiter(',');
  command->add_option("--baseline", flags.baseline,
                      "baseline strategy for comparisons");
  command->add_option("--granularity", flags.granularity,
                      "equity split granularity: zip or state");
  command->add_option("--weighting", flags.weighting,
                      "group mean weighting: unit or population");
}

sitegrid::RunConfig make_config(const Flags& flags) {
  sitegrid::RunConfig config;
  if (!flags.config_path.empty()) {
    config = sitegrid::load_run_config(flags.config_path);
  }
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.seed_set) config.seed = flags.seed;
  if (!flags.grid.empty()) config.n_grid = sitegrid::parse_grid(flags.grid);
  if (!flags.strategies.empty()) {
    std::vector<sitegrid::StrategySpec> kept;
    for (const auto& name : flags.strategies) {
      kept.push_back(sitegrid::find_strategy(config.strategies, name));
    }
    config.strategies = std::move(kept);
  }
  if (!flags.baseline.empty()) config.baseline = flags.baseline;
  if (!flags.granularity.empty()) {
    auto granularity = sitegrid::granularity_from_name(flags.granularity);
    config.granularity = granularity;
    for (auto& split : config.splits) split.granularity = granularity;
  }
  if (!flags.weighting.empty()) {
    config.weighting = sitegrid::weighting_from_name(flags.weighting);
  }
  sitegrid::validate_config(config);
  return config;
}

std::string error_line(std::string_view code, const std::string& message) {
  nlohmann::ordered_json doc;
  doc["error"] = code;
  doc["message"] = message;
  return doc.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic rooftop-solar siting and equity analysis"};
  app.require_subcommand(1);

  Flags flags;
  CLI::App* ingest = app.add_subcommand(
      "ingest", "join and clean the source CSVs into the canonical dataset");
  CLI::App* analyze = app.add_subcommand(
      "analyze", "per-panel metrics, fits, quadrants and equity reports");
  CLI::App* project = app.add_subcommand(
      "project", "sweep siting strategies over the budget grid");
  CLI::App* synth = app.add_subcommand(
      "synth", "generate a seeded synthetic canonical dataset");
  for (CLI::App* command : {ingest, analyze, project, synth}) {
    add_common_flags(command, flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const int verbosity = log_verbosity();
  try {
    sitegrid::RunConfig config = make_config(flags);
    if (verbosity >= 2) {
      std::cerr << "out dir: " << config.out_dir.string() << "\n";
      std::cerr << "seed: " << config.seed << "\n";
    }
    sitegrid::CommandResult result;
    if (ingest->parsed()) {
      result = sitegrid::cmd_ingest(config);
    } else if (analyze->parsed()) {
      result = sitegrid::cmd_analyze(config);
    } else if (project->parsed()) {
      result = sitegrid::cmd_project(config);
    } else {
      result = sitegrid::cmd_synth(config);
    }
    if (verbosity >= 1) {
      for (const auto& path : result.written) {
        std::cerr << "wrote " << path.string() << "\n";
      }
    }
    return 0;
  } catch (const sitegrid::Error& e) {
    std::cerr << error_line(sitegrid::error_code_name(e.code()), e.what())
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << error_line("internal", e.what()) << "\n";
    return 1;
  }
}
