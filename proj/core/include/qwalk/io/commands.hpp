#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qwalk/io/config.hpp"
#include "qwalk/io/csv.hpp"

namespace qwalk::io {

/// Command-line overrides applied on top of the config file.
struct CommandOptions {
  std::filesystem::path config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::filesystem::path> map_path;  ///< evolve only
};

/// Exit statuses of run_command.
enum ExitStatus : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitAmbiguous = 3,
};

// Each command writes its CSVs under cfg.output_dir and returns what it wrote.
// Column layouts are listed in docs/csv_schema.md.

/// evolve.csv: distribution per step for map 0 at p_values[0], or for `map_path`.
std::vector<OutputRecord> cmd_evolve(const SimulationConfig& cfg,
                                     const std::optional<std::filesystem::path>& map_path = {});
/// ensemble.csv and ensemble_distributions.csv for every p in p_values.
std::vector<OutputRecord> cmd_ensemble(const SimulationConfig& cfg);
/// beta.csv: power-law exponent per p (or for synthetic_variances when given).
std::vector<OutputRecord> cmd_beta(const SimulationConfig& cfg);
/// similarity_scan.csv over p_grid, then crossing.csv for crossing_steps.
std::vector<OutputRecord> cmd_crossing(const SimulationConfig& cfg);
/// Coincidence matrices per (p, step) and var2.csv. Needs two_photon.enabled.
std::vector<OutputRecord> cmd_two_photon(const SimulationConfig& cfg);
/// hom.csv: normalised coincidences versus delay. Needs two_photon.enabled.
std::vector<OutputRecord> cmd_hom(const SimulationConfig& cfg);
/// Phase-map files under maps/ plus maps/index.csv.
std::vector<OutputRecord> cmd_gen_maps(const SimulationConfig& cfg);

std::span<const std::string_view> command_names();

/// Load the config, apply overrides, run `name`, write manifest.json. Errors are
/// reported on `err` with the failing stage; the return value is an ExitStatus.
int run_command(std::string_view name, const CommandOptions& options, std::ostream& log,
                std::ostream& err);

}  // namespace qwalk::io
