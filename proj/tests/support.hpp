#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sitegrid/dataset.hpp"
#include "sitegrid/error.hpp"
#include "sitegrid/types.hpp"

namespace testsupport {

/// The ErrorCode a callable throws, or nullopt when it doesn't throw.
template <typename F>
std::optional<sitegrid::ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const sitegrid::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// A unique empty directory under the system temp dir.
inline std::filesystem::path fresh_dir(const std::string& tag) {
  static std::mt19937_64 rng{std::random_device{}()};
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    auto candidate = base / (tag + "_" + std::to_string(rng()));
    std::error_code ec;
    if (std::filesystem::create_directories(candidate, ec)) return candidate;
  }
}

inline void write_file(const std::filesystem::path& path,
                       std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline sitegrid::ZipRecord zip(std::string code, std::string state,
                               double existing, double potential,
                               double energy, double carbon) {
  sitegrid::ZipRecord record;
  record.zip_code = std::move(code);
  record.state_code = std::move(state);
  record.existing_installs = existing;
  record.potential_installs = potential;
  record.energy_potential_total = energy;
  record.carbon_offset_total = carbon;
  return record;
}

/// Dataset from hand-built records: sorted, state aggregates filled.
inline sitegrid::Dataset dataset(std::vector<sitegrid::ZipRecord> zips) {
  sitegrid::Dataset out;
  out.zips = std::move(zips);
  std::sort(out.zips.begin(), out.zips.end(),
            [](const sitegrid::ZipRecord& a, const sitegrid::ZipRecord& b) {
              return a.zip_code < b.zip_code;
            });
  out.provenance.retained = out.zips.size();
  out.provenance.intersection_size = out.zips.size();
  return sitegrid::aggregate_states(std::move(out));
}

}  // namespace testsupport
