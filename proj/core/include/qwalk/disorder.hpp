#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qwalk {

/// How disordered cells are selected.
enum class SamplingMode {
  bernoulli,       ///< each cell independently with probability p
  exact_fraction,  ///< exactly floor(p * N_cells) cells, uniformly without replacement
};

/// Which phase a disordered cell carries.
enum class PhaseDraw {
  /// Non-zero alphabet entry with probability min(1, (K-1) / (K p)): the density of
  /// non-zero phases grows as p and saturates at the fully random value (K-1)/K.
  saturating,
  /// Uniform over the whole alphabet, so some disordered cells still read 0.
  uniform,
};

std::string_view to_string(SamplingMode mode);
std::string_view to_string(PhaseDraw draw);
SamplingMode sampling_mode_from_string(std::string_view text);
PhaseDraw phase_draw_from_string(std::string_view text);

/// Allowed phases in units of pi. The first entry must be 0 (the ordered phase).
using PhaseAlphabet = std::vector<double>;

inline PhaseAlphabet default_alphabet() { return {0.0, 1.0}; }

struct DisorderSpec {
  double p = 0.0;
  int steps = 7;
  PhaseAlphabet alphabet = default_alphabet();
  SamplingMode sampling = SamplingMode::bernoulli;
  PhaseDraw draw = PhaseDraw::saturating;
  std::uint64_t master_seed = 1;

  /// Throws DomainError on p outside [0,1], steps < 1 or a bad alphabet.
  void validate() const;
};

/// One disorder realisation. Row n (1-based step) has 2n+1 entries for sites -n..n,
/// phases in units of pi. `mask` flags the cells drawn as disordered.
struct PhaseMap {
  int steps = 0;
  std::vector<std::vector<double>> rows;
  std::vector<std::vector<std::uint8_t>> mask;
  PhaseAlphabet alphabet = default_alphabet();
  double p_nominal = 0.0;
  std::uint64_t seed = 0;
  SamplingMode sampling = SamplingMode::bernoulli;
  PhaseDraw draw = PhaseDraw::saturating;

  std::span<const double> row(int step) const { return rows.at(static_cast<std::size_t>(step - 1)); }
  std::size_t cell_count() const;

  /// All-zero map (no disordered cells).
  static PhaseMap ordered(int steps);

  bool operator==(const PhaseMap&) const = default;
};

/// Seed of map `map_index` in the stream identified by `master_seed`.
std::uint64_t derive_map_seed(std::uint64_t master_seed, std::uint64_t map_index);

PhaseMap generate_phase_map(const DisorderSpec& spec, std::uint64_t map_index);

/// Rebuild a map from its own seed; generate_phase_map(spec, k) equals
/// regenerate_phase_map(spec with seed derive_map_seed(master, k)).
PhaseMap regenerate_phase_map(std::uint64_t seed, double p, int steps, SamplingMode sampling,
                              PhaseDraw draw = PhaseDraw::saturating,
                              const PhaseAlphabet& alphabet = default_alphabet());

/// Fraction of cells flagged as disordered.
double realized_fraction(const PhaseMap& map);

/// Text form: `key=value` header lines (steps, p, seed, mode, draw, alphabet), one
/// whitespace-separated row per step with phases as multiples of pi, then an
/// optional `mask` line followed by the disorder flags in the same shape.
std::string format_phase_map(const PhaseMap& map);

/// Inverse of format_phase_map. Throws ParseError naming the line and field.
/// Without a mask block the mask is taken as (phase != 0).
PhaseMap parse_phase_map(std::string_view text);

void save_map(const PhaseMap& map, const std::filesystem::path& path);
PhaseMap load_map(const std::filesystem::path& path);

}  // namespace qwalk
