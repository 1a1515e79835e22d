#include "sitegrid/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>

#include "sitegrid/dataset.hpp"
#include "sitegrid/error.hpp"

namespace sitegrid {
namespace {

constexpr std::array<std::string_view, 50> kStateCodes{
    "AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DE", "FL", "GA",
    "HI", "IA", "ID", "IL", "IN", "KS", "KY", "LA", "MA", "MD",
    "ME", "MI", "MN", "MO", "MS", "MT", "NC", "ND", "NE", "NH",
    "NJ", "NM", "NV", "NY", "OH", "OK", "OR", "PA", "RI", "SC",
    "SD", "TN", "TX", "UT", "VA", "VT", "WA", "WI", "WV", "WY"};

constexpr std::array<std::string_view, 8> kFuels{
    "biomass", "coal",    "hydro", "natural_gas",
    "nuclear", "petroleum", "solar", "wind"};

/// Hand-rolled transforms over mt19937_64 so identical seeds give
/// identical datasets regardless of standard-library distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal(double mean, double stddev) {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    return mean + stddev * z;
  }

  double lognormal(double mu, double sigma, double lo, double hi) {
    return std::clamp(std::exp(normal(mu, sigma)), lo, hi);
  }

  double exponential() {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return -std::log(u);
  }

 private:
  std::mt19937_64 engine_;
};

std::string zip_code_for(std::size_t index, std::size_t step) {
  std::string code = std::to_string(10000 + index * step);
  return code;
}

}  // namespace

SynthProfile synth_profile_from_name(const std::string& name) {
  if (name == "independent") return SynthProfile::independent;
  if (name == "anti_correlated") return SynthProfile::anti_correlated;
  throw Error(ErrorCode::invalid_argument,
              "unknown synth profile: " + name);
}

std::string_view synth_profile_name(SynthProfile profile) {
  return profile == SynthProfile::independent ? "independent"
                                              : "anti_correlated";
}

Dataset synth_dataset(std::uint64_t seed, const SynthOptions& options) {
  if (options.zip_count == 0) {
    throw Error(ErrorCode::invalid_argument,
                "synthetic dataset needs at least one zip");
  }
  if (options.zip_count > 90000) {
    throw Error(ErrorCode::invalid_argument,
                "synthetic dataset is limited to 90000 zips");
  }
  std::size_t state_count = std::clamp<std::size_t>(options.state_count, 1,
                                                    kStateCodes.size());
  Rng rng(seed);

  struct StateParams {
    double carbon_intensity;  // kg CO2 per kWh displaced
    double sun_offset;        // kWh/yr/panel shift
    double republican;
    double democratic;
    std::map<std::string, double> mix;
  };
  std::vector<StateParams> params(state_count);
  for (StateParams& state : params) {
    state.carbon_intensity = rng.uniform(0.2, 1.0);
    state.sun_offset = rng.normal(0.0, 120.0);
    state.republican = rng.uniform(0.25, 0.7);
    state.democratic = (1.0 - state.republican) * rng.uniform(0.85, 0.98);
    double total = 0.0;
    std::array<double, kFuels.size()> raw;
    for (std::size_t f = 0; f < kFuels.size(); ++f) {
      double weight = rng.exponential();
      if (kFuels[f] == "coal") weight *= 0.5 + 2.0 * state.carbon_intensity;
      if (kFuels[f] == "wind" || kFuels[f] == "solar") {
        weight *= 1.5 - state.carbon_intensity;
      }
      raw[f] = weight;
      total += weight;
    }
    double mix_sum = 0.0;
    for (std::size_t f = 0; f + 1 < kFuels.size(); ++f) {
      double share = raw[f] / total;
      state.mix[std::string(kFuels[f])] = share;
      mix_sum += share;
    }
    // Assign the remainder so the shares sum to exactly 1.
    state.mix[std::string(kFuels.back())] = 1.0 - mix_sum;
  }

  const std::size_t n = options.zip_count;
  const std::size_t step = std::max<std::size_t>(1, 80000 / n);

  Dataset dataset;
  dataset.zips.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t state_index = i * state_count / n;
    const StateParams& state = params[state_index];

    ZipRecord zip;
    zip.zip_code = zip_code_for(i, step);
    zip.state_code = kStateCodes[state_index];

    double potential = rng.lognormal(5.6, 0.6, 25.0, 20000.0);
    double energy_per_panel = std::clamp(
        rng.normal(1400.0 + state.sun_offset, 220.0), 600.0, 2300.0);
    double intensity = std::clamp(
        state.carbon_intensity + rng.normal(0.0, 0.08), 0.05, 1.5);

    double intensity_norm = (intensity - 0.05) / 1.45;
    double noise = rng.uniform();
    double adoption;
    if (options.profile == SynthProfile::anti_correlated) {
      adoption = std::clamp(0.9 - 0.75 * intensity_norm, 0.05, 0.95) *
                 (0.7 + 0.6 * noise);
    } else {
      adoption = 0.05 + 0.9 * noise;
    }
    adoption = std::clamp(adoption, 0.01, 0.99);
    double realized_fraction = 0.4 * adoption;

    zip.potential_installs = potential;
    zip.existing_installs = realized_fraction * potential;
    zip.energy_potential_total = potential * energy_per_panel;
    zip.carbon_offset_total = potential * energy_per_panel * intensity;
    zip.percent_covered = 100.0;

    double income = rng.lognormal(10.9, 0.3, 2.0e4, 2.5e5) *
                    (0.8 + 0.45 * adoption);
    bool income_missing = rng.uniform() < 0.02;
    if (!income_missing) zip.median_income = income;

    zip.population = static_cast<std::int64_t>(
        rng.lognormal(9.2, 0.8, 200.0, 200000.0));

    double white = rng.exponential() * 8.0;
    double black = rng.exponential() * (0.6 + 1.6 * (1.0 - adoption));
    double asian = rng.exponential() * (0.3 + 0.8 * adoption);
    double hispanic = rng.exponential() * 1.2;
    double share_total = white + black + asian + hispanic;
    double covered_share = rng.uniform(0.92, 0.99);
    zip.race_share_white = covered_share * white / share_total;
    zip.race_share_black = covered_share * black / share_total;
    zip.race_share_asian = covered_share * asian / share_total;
    zip.race_share_hispanic = covered_share * hispanic / share_total;

    dataset.zips.push_back(std::move(zip));
  }

  std::vector<VotingRow> voting;
  std::vector<EnergyMixRow> mix_rows;
  for (std::size_t s = 0; s < state_count; ++s) {
    voting.push_back({std::string(kStateCodes[s]), params[s].republican,
                      params[s].democratic});
    for (const auto& [fuel, share] : params[s].mix) {
      mix_rows.push_back({std::string(kStateCodes[s]), fuel, share});
    }
  }

  dataset = aggregate_states(std::move(dataset), voting, mix_rows);

  std::string origin = "synthetic:seed=" + std::to_string(seed) +
                       ":profile=" +
                       std::string(synth_profile_name(options.profile));
  Provenance& prov = dataset.provenance;
  prov.sunroof = {origin, n, 0};
  prov.acs = {origin, n, 0};
  prov.voting = SourceInfo{origin, voting.size(), 0};
  prov.energy_mix = SourceInfo{origin, mix_rows.size(), 0};
  prov.intersection_size = n;
  prov.retained = n;
  return dataset;
}

}  // namespace sitegrid
