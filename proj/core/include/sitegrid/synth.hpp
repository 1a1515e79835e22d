#pragma once

#include <cstdint>
#include <string>

#include "sitegrid/types.hpp"

namespace sitegrid {

/// Correlation structure of a generated dataset.
///
/// `independent` draws energy and carbon drivers separately;
/// `anti_correlated` additionally concentrates existing installs in
/// low-carbon-intensity states, reproducing the adoption pattern the
/// analysis pipeline is meant to surface (per-panel carbon offset
/// negatively correlated with existing adoption).
enum class SynthProfile {
  independent,
  anti_correlated,
};

SynthProfile synth_profile_from_name(const std::string& name);
std::string_view synth_profile_name(SynthProfile profile);

struct SynthOptions {
  std::size_t zip_count = 500;
  std::size_t state_count = 20;  // clamped to [1, 50]
  SynthProfile profile = SynthProfile::independent;
};

/// Deterministic synthetic dataset: same seed and options, same bytes.
/// Output is already canonical (valid, sorted, percent_covered == 100)
/// with states aggregated, so it can feed analyze/project directly.
Dataset synth_dataset(std::uint64_t seed, const SynthOptions& options = {});

}  // namespace sitegrid
