#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qwalk/disorder.hpp"
#include "qwalk/fit.hpp"

namespace qwalk::io {

struct TwoPhotonSettings {
  bool enabled = false;
  double indistinguishability = 1.0;  ///< eta used by the two-photon command
  double visibility = 0.93;           ///< HOM dip visibility cap
  double coherence_time = 1.0;
  std::vector<double> delays;         ///< HOM scan delays
  bool display_normalize = false;     ///< add a max-normalised column to matrix CSVs
};

/// Every tunable of a run. Parsed from a flat `key = value` file; `#` starts a
/// comment. Lists are comma separated or given as `start:stop:step` ranges.
struct SimulationConfig {
  int steps = 7;
  int n_max = 0;  ///< 0 means "same as steps"
  std::vector<double> p_values{0.0, 0.05, 0.10, 0.20, 1.0};
  int n_maps = 1000;
  std::uint64_t master_seed = 1;
  double coin_reflectivity = 0.5;
  SamplingMode sampling = SamplingMode::bernoulli;
  PhaseDraw draw = PhaseDraw::saturating;
  PhaseAlphabet alphabet = default_alphabet();
  FitRange fit_range{1, 7};
  FitMethod fit_method = FitMethod::power_law;
  std::vector<double> p_grid;  ///< defaults to 0:1:0.01
  std::vector<int> crossing_steps{5, 6, 7};  ///< parse_config defaults to the last three steps
  std::vector<double> synthetic_variances;  ///< when set, `beta` fits these instead of simulating
  double transmission = 1.0;
  unsigned threads = 0;
  std::filesystem::path output_dir = "out";
  TwoPhotonSettings two_photon;

  SimulationConfig();

  int lattice_half_width() const { return n_max == 0 ? steps : n_max; }
  DisorderSpec disorder_spec(double p) const;

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  /// Resolved key/value pairs in file syntax; parsing them back yields this config.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Parse and validate. Unknown or repeated keys and malformed values raise
/// ConfigError naming the key.
SimulationConfig parse_config(std::string_view text);
SimulationConfig load_config(const std::filesystem::path& path);

/// Expand `a:b:h` into a + k h for k = 0..round((b - a) / h), or parse a comma list.
std::vector<double> parse_real_list(std::string_view text);

}  // namespace qwalk::io
