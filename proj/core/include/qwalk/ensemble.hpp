#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/disorder.hpp"
#include "qwalk/distribution.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Per-step statistics over n_maps phase maps at fixed p. Index k holds step k + 1.
struct EnsembleResult {
  double p = 0.0;
  int steps = 0;
  int n_maps = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> mean_variance;
  std::vector<double> std_variance;  ///< unbiased (n-1); 0 when n_maps == 1
  std::vector<Distribution> mean_distribution;

  /// Standard error of mean_variance at `step`.
  double standard_error(int step) const;
};

/// Evolve maps 0..n_maps-1 of `spec` from |0>_p|0>_c on a lattice of half-width
/// spec.steps and reduce. Maps are reduced in index order in fixed-size blocks,
/// so the result is bit-identical for every `threads` value (0 = hardware).
EnsembleResult run_ensemble(const DisorderSpec& spec, const CoinOperator& coin, int n_maps,
                            unsigned threads = 0);

/// S(G(0), G(p)) and S(G(1), G(p)) for every p in the grid and every step, where G(p)
/// is the ensemble-mean distribution. Indexing: [step - 1][p index].
struct SimilarityScan {
  std::vector<double> p_grid;
  int steps = 0;
  std::vector<std::vector<double>> to_ordered;
  std::vector<std::vector<double>> to_disordered;
  /// Ensemble results in grid order; kept so callers can emit distributions.
  std::vector<EnsembleResult> ensembles;
};

/// `base` supplies steps, alphabet, sampling, draw and master seed; its p is ignored.
/// The disordered reference G(1) is the p = 1 ensemble with the same seed stream.
SimilarityScan similarity_scan(std::span<const double> p_grid, const DisorderSpec& base,
                               const CoinOperator& coin, int n_maps, unsigned threads = 0);

struct CrossingPoint {
  int step_n = 0;
  double p_star = 0.0;
  /// Set when the bracketing grid interval is wider than 0.05.
  bool low_resolution = false;
};

/// p where S0 - S1 changes sign, by linear interpolation on the bracketing grid
/// interval. Throws AmbiguityError unless the sign changes exactly once.
CrossingPoint crossing_point(std::span<const double> p_grid, std::span<const double> s_ordered,
                             std::span<const double> s_disordered, int step_n);

}  // namespace qwalk
