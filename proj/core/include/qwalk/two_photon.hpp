#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/distribution.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Two photons injected into distinct modes; `indistinguishability` (eta) weights
/// bosonic interference against classical, distinguishable-particle statistics.
struct PairInput {
  int mode_a = 0;
  int mode_b = 1;
  double indistinguishability = 1.0;
};

/// Photons in both coin ports at site 0.
PairInput both_ports_at_origin(const ModeUnitary& u, double indistinguishability);

/// Symmetric matrix over mode pairs. Off-diagonal (k, l) holds half of the probability
/// of the unordered outcome {k, l}; the diagonal holds the probability of both photons
/// in mode k. The whole matrix sums to 1.
struct ModePairMatrix {
  int n_max = 0;
  Eigen::MatrixXd probabilities;
};

/// Same convention as ModePairMatrix, aggregated over coins; entry (i, j) belongs to
/// sites (offset + i, offset + j).
struct CoincidenceMatrix {
  int offset = 0;
  Eigen::MatrixXd probabilities;

  double at(int site_i, int site_j) const;
  double total() const { return probabilities.sum(); }
};

/// Unordered-pair probabilities:
///   k != l : eta |U_ka U_lb + U_la U_kb|^2 + (1 - eta)(|U_ka|^2 |U_lb|^2 + |U_la|^2 |U_kb|^2)
///   k == l : eta 2 |U_ka U_kb|^2 + (1 - eta) |U_ka|^2 |U_kb|^2
/// Throws DomainError for a non-unitary U (defect > 1e-10), equal input modes or eta
/// outside [0, 1].
ModePairMatrix two_photon_mode_distribution(const ModeUnitary& u, const PairInput& input);

CoincidenceMatrix site_coincidences(const ModePairMatrix& modes);

/// Variance of the pair mean position (i + j) / 2. DomainError unless normalised.
double variance2(const CoincidenceMatrix& cm);

/// Single-detector site distribution (row sums).
Distribution pair_marginal(const CoincidenceMatrix& cm);

/// Each entry divided by the largest one (display only).
CoincidenceMatrix normalized_to_max(const CoincidenceMatrix& cm);

/// Gaussian indistinguishability eta(tau) = V exp(-(tau / tau_c)^2).
double hom_indistinguishability(double delay, double coherence_time, double visibility);

struct HomScan {
  std::vector<double> delays;
  double coherence_time = 1.0;
  double visibility = 1.0;
  std::vector<double> indistinguishability;
  std::vector<double> coincidences;  ///< normalised to the distinguishable baseline
};

/// Coincidences between the two output ports of a single walk step with the photons
/// in both input ports, as a function of delay. DomainError if coherence_time <= 0 or
/// visibility is outside [0, 1].
HomScan hom_scan(std::span<const double> delays, double coherence_time, double visibility,
                 const CoinOperator& coin);

}  // namespace qwalk
