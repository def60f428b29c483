#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/disorder.hpp"
#include "qwalk/distribution.hpp"

namespace qwalk {

using Complex = std::complex<double>;

/// 2x2 coin acting on the coin index. Built from a beam-splitter reflectivity R as
/// [[sqrt R, sqrt(1-R)], [sqrt(1-R), -sqrt R]]; R = 0.5 is the Hadamard coin.
struct CoinOperator {
  Eigen::Matrix2cd matrix;
  double reflectivity = 0.5;
};

CoinOperator coin_from_reflectivity(double reflectivity);
inline CoinOperator hadamard_coin() { return coin_from_reflectivity(0.5); }

/// Walker wavefunction on sites -n_max..n_max with a two-level coin.
///
/// Storage is dense and interleaved: index (site + n_max) * 2 + coin. `step()` counts
/// the steps applied since the initial state and bounds the light cone.
class WalkState {
 public:
  explicit WalkState(int n_max);

  int n_max() const { return n_max_; }
  int step() const { return step_; }
  int site_count() const { return 2 * n_max_ + 1; }

  Complex amplitude(int site, int coin) const;
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  double norm_squared() const;

  bool operator==(const WalkState&) const = default;

 private:
  friend WalkState initial_state(int, std::pair<Complex, Complex>);
  friend void advance(WalkState&, const CoinOperator&, std::span<const double>, double);
  friend void advance_ordered(WalkState&, const CoinOperator&, double);

  int n_max_;
  int step_ = 0;
  std::vector<Complex> amplitudes_;
};

/// Walker at site 0 with coin amplitudes (a0, a1). |a0|^2 + |a1|^2 must equal 1
/// within 1e-12 and n_max must be at least 1; DomainError otherwise.
WalkState initial_state(int n_max, std::pair<Complex, Complex> coin_amplitudes = {1.0, 0.0});

/// One walk step psi <- S (I x C) P psi, in place.
///
/// `phase_row` holds the phase of each site in units of pi, centred on site 0
/// (odd length 2k+1 covering -k..k); only the coin-1 amplitude picks up the phase.
/// The row must reach every site the state can occupy (k >= step()). `transmission`
/// scales every amplitude and models uniform loss. Throws CapacityError when the
/// next step would leave the lattice.
void advance(WalkState& state, const CoinOperator& coin, std::span<const double> phase_row,
             double transmission = 1.0);

/// advance() with the phase stage skipped entirely.
void advance_ordered(WalkState& state, const CoinOperator& coin, double transmission = 1.0);

/// Value-returning form of advance().
WalkState apply_step(const WalkState& state, const CoinOperator& coin,
                     std::span<const double> phase_row, double transmission = 1.0);

/// States after steps 1..steps, starting from `start` (default |0>_p|0>_c).
/// Row n of the map drives step n.
std::vector<WalkState> evolve(int n_max, const CoinOperator& coin, const PhaseMap& phase_map,
                              int steps, std::pair<Complex, Complex> start = {1.0, 0.0},
                              double transmission = 1.0);

/// Site probabilities P_i = sum_c |psi_{i,c}|^2 over -n_max..n_max, renormalised by the
/// state norm so lossy states still yield a probability distribution.
Distribution position_distribution(const WalkState& state);

/// Single-particle transfer matrix over modes m = (site + n_max) * 2 + coin.
///
/// Modes live on a ring of 2 n_max + 1 sites so that every column stays normalised;
/// for walks launched at site 0 with steps <= n_max the ring never wraps.
struct ModeUnitary {
  int n_max = 0;
  Eigen::MatrixXcd matrix;

  int mode_count() const { return static_cast<int>(matrix.rows()); }
  int mode_index(int site, int coin) const { return (site + n_max) * 2 + coin; }
  int site_of(int mode) const { return mode / 2 - n_max; }
  /// max |U^dagger U - I|
  double unitarity_defect() const;
};

ModeUnitary single_particle_unitary(int n_max, const CoinOperator& coin,
                                    const PhaseMap& phase_map, int steps);

/// Phase factor exp(i pi x); exact for multiples of 1/2.
Complex phase_factor(double half_turns);

}  // namespace qwalk
