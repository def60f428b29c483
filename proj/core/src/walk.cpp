#include "qwalk/walk.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {
namespace {

// One step on a ring of `width` sites, reading from `in` and writing to `out`
// (both interleaved site/coin). Only sites [lo, hi] of `in` are visited; the
// caller guarantees everything else is zero.
void ring_step(std::span<const Complex> in, std::span<Complex> out, int width, int half_width,
               int lo, int hi, const Eigen::Matrix2cd& coin, std::span<const double> phase_row,
               double transmission) {
  const int row_half = static_cast<int>(phase_row.size() / 2);
  const Complex c00 = coin(0, 0) * transmission;
  const Complex c01 = coin(0, 1) * transmission;
  const Complex c10 = coin(1, 0) * transmission;
  const Complex c11 = coin(1, 1) * transmission;

  std::fill(out.begin(), out.end(), Complex{});
  for (int j = lo; j <= hi; ++j) {
    const int site = j - half_width;
    const Complex a0 = in[2 * j];
    Complex a1 = in[2 * j + 1];
    if (a0 == Complex{} && a1 == Complex{}) continue;
    if (!phase_row.empty() && std::abs(site) <= row_half) {
      const double phase = phase_row[static_cast<std::size_t>(site + row_half)];
      if (phase != 0.0) a1 *= phase_factor(phase);
    }
    const int left = (j == 0) ? width - 1 : j - 1;
    const int right = (j == width - 1) ? 0 : j + 1;
    out[2 * left] += c00 * a0 + c01 * a1;
    out[2 * right + 1] += c10 * a0 + c11 * a1;
  }
}

void check_row(std::span<const double> row, int step_index) {
  if (row.size() % 2 == 0) {
    throw DomainError("phase row for step " + std::to_string(step_index) +
                      " must have odd length, got " + std::to_string(row.size()));
  }
  const int half = static_cast<int>(row.size() / 2);
  if (half < step_index - 1) {
    throw DomainError("phase row for step " + std::to_string(step_index) + " covers sites -" +
                      std::to_string(half) + ".." + std::to_string(half) +
                      " but the walker can reach " + std::to_string(step_index - 1));
  }
}

}  // namespace

Complex phase_factor(double half_turns) {
  double reduced = std::fmod(half_turns, 2.0);
  if (reduced < 0.0) reduced += 2.0;
  if (reduced == 0.0) return {1.0, 0.0};
  if (reduced == 0.5) return {0.0, 1.0};
  if (reduced == 1.0) return {-1.0, 0.0};
  if (reduced == 1.5) return {0.0, -1.0};
  return std::polar(1.0, std::numbers::pi * reduced);
}

CoinOperator coin_from_reflectivity(double reflectivity) {
  if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) {
    throw DomainError("reflectivity must lie in [0,1], got " + std::to_string(reflectivity));
  }
  const double r = std::sqrt(reflectivity);
  const double t = std::sqrt(1.0 - reflectivity);
  CoinOperator coin;
  coin.matrix << r, t, t, -r;
  coin.reflectivity = reflectivity;
  return coin;
}

WalkState::WalkState(int n_max) : n_max_(n_max) {
  if (n_max < 1) throw DomainError("n_max must be >= 1, got " + std::to_string(n_max));
  amplitudes_.assign(static_cast<std::size_t>(2 * (2 * n_max + 1)), Complex{});
}

Complex WalkState::amplitude(int site, int coin) const {
  if (std::abs(site) > n_max_ || coin < 0 || coin > 1) return {};
  return amplitudes_[static_cast<std::size_t>((site + n_max_) * 2 + coin)];
}

double WalkState::norm_squared() const {
  double sum = 0.0;
  for (const Complex& a : amplitudes_) sum += std::norm(a);
  return sum;
}

WalkState initial_state(int n_max, std::pair<Complex, Complex> coin_amplitudes) {
  const double norm = std::norm(coin_amplitudes.first) + std::norm(coin_amplitudes.second);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw DomainError("coin amplitudes must be normalised, |a0|^2+|a1|^2 = " + std::to_string(norm));
  }
  WalkState state(n_max);
  state.amplitudes_[static_cast<std::size_t>(2 * n_max)] = coin_amplitudes.first;
  state.amplitudes_[static_cast<std::size_t>(2 * n_max + 1)] = coin_amplitudes.second;
  return state;
}

void advance(WalkState& state, const CoinOperator& coin, std::span<const double> phase_row,
             double transmission) {
  const int next = state.step_ + 1;
  if (next > state.n_max_) {
    throw CapacityError("step " + std::to_string(next) + " exceeds lattice half-width n_max = " +
                        std::to_string(state.n_max_));
  }
  check_row(phase_row, next);
  std::vector<Complex> out(state.amplitudes_.size());
  ring_step(state.amplitudes_, out, state.site_count(), state.n_max_, state.n_max_ - state.step_,
            state.n_max_ + state.step_, coin.matrix, phase_row, transmission);
  state.amplitudes_ = std::move(out);
  state.step_ = next;
}

void advance_ordered(WalkState& state, const CoinOperator& coin, double transmission) {
  const int next = state.step_ + 1;
  if (next > state.n_max_) {
    throw CapacityError("step " + std::to_string(next) + " exceeds lattice half-width n_max = " +
                        std::to_string(state.n_max_));
  }
  std::vector<Complex> out(state.amplitudes_.size());
  ring_step(state.amplitudes_, out, state.site_count(), state.n_max_, state.n_max_ - state.step_,
            state.n_max_ + state.step_, coin.matrix, {}, transmission);
  state.amplitudes_ = std::move(out);
  state.step_ = next;
}

WalkState apply_step(const WalkState& state, const CoinOperator& coin,
                     std::span<const double> phase_row, double transmission) {
  WalkState next = state;
  advance(next, coin, phase_row, transmission);
  return next;
}

std::vector<WalkState> evolve(int n_max, const CoinOperator& coin, const PhaseMap& phase_map,
                              int steps, std::pair<Complex, Complex> start, double transmission) {
  if (steps < 0) throw DomainError("steps must be non-negative");
  if (steps > n_max) {
    throw CapacityError("requested " + std::to_string(steps) + " steps on a lattice with n_max = " +
                        std::to_string(n_max));
  }
  if (phase_map.steps < steps || static_cast<int>(phase_map.rows.size()) < steps) {
    throw DomainError("phase map has " + std::to_string(phase_map.rows.size()) +
                      " rows, evolution needs " + std::to_string(steps));
  }
  std::vector<WalkState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(steps));
  WalkState state = initial_state(n_max, start);
  for (int n = 1; n <= steps; ++n) {
    advance(state, coin, phase_map.row(n), transmission);
    trajectory.push_back(state);
  }
  return trajectory;
}

Distribution position_distribution(const WalkState& state) {
  const double norm = state.norm_squared();
  if (!(norm > 0.0)) throw DomainError("cannot take the distribution of a zero state");
  Distribution dist;
  dist.offset = -state.n_max();
  dist.probabilities.resize(static_cast<std::size_t>(state.site_count()));
  const auto amps = state.amplitudes();
  for (std::size_t j = 0; j < dist.probabilities.size(); ++j) {
    dist.probabilities[j] = std::norm(amps[2 * j]) + std::norm(amps[2 * j + 1]);
  }
  if (norm != 1.0) {
    for (double& v : dist.probabilities) v /= norm;
  }
  return dist;
}

double ModeUnitary::unitarity_defect() const {
  const Eigen::MatrixXcd gram = matrix.adjoint() * matrix;
  return (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

ModeUnitary single_particle_unitary(int n_max, const CoinOperator& coin,
                                    const PhaseMap& phase_map, int steps) {
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  if (steps < 0) throw DomainError("steps must be non-negative");
  if (steps > n_max) {
    throw CapacityError("requested " + std::to_string(steps) + " steps on a lattice with n_max = " +
                        std::to_string(n_max));
  }
  if (static_cast<int>(phase_map.rows.size()) < steps) {
    throw DomainError("phase map has fewer rows than requested steps");
  }
  const int width = 2 * n_max + 1;
  const int modes = 2 * width;
  ModeUnitary u;
  u.n_max = n_max;
  u.matrix = Eigen::MatrixXcd::Identity(modes, modes);

  std::vector<Complex> column(static_cast<std::size_t>(modes));
  std::vector<Complex> next(static_cast<std::size_t>(modes));
  for (int m = 0; m < modes; ++m) {
    std::fill(column.begin(), column.end(), Complex{});
    column[static_cast<std::size_t>(m)] = 1.0;
    for (int n = 1; n <= steps; ++n) {
      ring_step(column, next, width, n_max, 0, width - 1, coin.matrix, phase_map.row(n), 1.0);
      column.swap(next);
    }
    for (int k = 0; k < modes; ++k) u.matrix(k, m) = column[static_cast<std::size_t>(k)];
  }
  return u;
}

}  // namespace qwalk
