#include "qwalk/two_photon.hpp"

#include <cmath>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

PairInput both_ports_at_origin(const ModeUnitary& u, double indistinguishability) {
  return {u.mode_index(0, 0), u.mode_index(0, 1), indistinguishability};
}

double CoincidenceMatrix::at(int site_i, int site_j) const {
  const int i = site_i - offset;
  const int j = site_j - offset;
  if (i < 0 || j < 0 || i >= probabilities.rows() || j >= probabilities.cols()) return 0.0;
  return probabilities(i, j);
}

ModePairMatrix two_photon_mode_distribution(const ModeUnitary& u, const PairInput& input) {
  const int modes = u.mode_count();
  if (input.mode_a == input.mode_b) throw DomainError("input modes must be distinct");
  if (input.mode_a < 0 || input.mode_b < 0 || input.mode_a >= modes || input.mode_b >= modes) {
    throw DomainError("input mode outside the unitary");
  }
  const double eta = input.indistinguishability;
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("indistinguishability must lie in [0,1]");
  if (const double defect = u.unitarity_defect(); !(defect <= 1e-10)) {
    throw DomainError("mode transfer matrix is not unitary (defect " + std::to_string(defect) + ")");
  }

  const auto col_a = u.matrix.col(input.mode_a);
  const auto col_b = u.matrix.col(input.mode_b);
  ModePairMatrix out;
  out.n_max = u.n_max;
  out.probabilities = Eigen::MatrixXd::Zero(modes, modes);
  for (int k = 0; k < modes; ++k) {
    const Complex ka = col_a(k), kb = col_b(k);
    const double pka = std::norm(ka), pkb = std::norm(kb);
    out.probabilities(k, k) = eta * 2.0 * std::norm(ka * kb) + (1.0 - eta) * pka * pkb;
    for (int l = k + 1; l < modes; ++l) {
      const Complex la = col_a(l), lb = col_b(l);
      const double bosonic = std::norm(ka * lb + la * kb);
      const double classical = pka * std::norm(lb) + std::norm(la) * pkb;
      const double half = 0.5 * (eta * bosonic + (1.0 - eta) * classical);
      out.probabilities(k, l) = half;
      out.probabilities(l, k) = half;
    }
  }
  return out;
}

CoincidenceMatrix site_coincidences(const ModePairMatrix& modes) {
  const int sites = 2 * modes.n_max + 1;
  if (modes.probabilities.rows() != 2 * sites) throw DomainError("mode matrix does not match n_max");
  CoincidenceMatrix cm;
  cm.offset = -modes.n_max;
  cm.probabilities = Eigen::MatrixXd::Zero(sites, sites);
  for (int i = 0; i < sites; ++i) {
    for (int j = i; j < sites; ++j) {
      const double v = modes.probabilities.block<2, 2>(2 * i, 2 * j).sum();
      cm.probabilities(i, j) = v;
      cm.probabilities(j, i) = v;
    }
  }
  return cm;
}

double variance2(const CoincidenceMatrix& cm) {
  const double total = cm.total();
  if (std::abs(total - 1.0) > 1e-9) {
    throw DomainError("coincidence matrix is not normalised (sum = " + std::to_string(total) + ")");
  }
  double first = 0.0;
  double second = 0.0;
  for (int i = 0; i < cm.probabilities.rows(); ++i) {
    for (int j = 0; j < cm.probabilities.cols(); ++j) {
      const double centre = 0.5 * ((cm.offset + i) + (cm.offset + j));
      first += centre * cm.probabilities(i, j);
      second += centre * centre * cm.probabilities(i, j);
    }
  }
  return second - first * first;
}

Distribution pair_marginal(const CoincidenceMatrix& cm) {
  Distribution dist;
  dist.offset = cm.offset;
  dist.probabilities.resize(static_cast<std::size_t>(cm.probabilities.rows()));
  for (int i = 0; i < cm.probabilities.rows(); ++i) {
    dist.probabilities[static_cast<std::size_t>(i)] = cm.probabilities.row(i).sum();
  }
  return dist;
}

CoincidenceMatrix normalized_to_max(const CoincidenceMatrix& cm) {
  CoincidenceMatrix out = cm;
  const double peak = cm.probabilities.maxCoeff();
  if (peak > 0.0) out.probabilities /= peak;
  return out;
}

double hom_indistinguishability(double delay, double coherence_time, double visibility) {
  const double x = delay / coherence_time;
  return visibility * std::exp(-x * x);
}

HomScan hom_scan(std::span<const double> delays, double coherence_time, double visibility,
                 const CoinOperator& coin) {
  if (!(coherence_time > 0.0)) throw DomainError("coherence time must be positive");
  if (!(visibility >= 0.0 && visibility <= 1.0)) throw DomainError("visibility must lie in [0,1]");

  const ModeUnitary u = single_particle_unitary(1, coin, PhaseMap::ordered(1), 1);
  const int out_left = u.mode_index(-1, 0);
  const int out_right = u.mode_index(1, 1);
  // Probability of one photon in each output port (unordered pair: twice the entry).
  auto distinct_ports = [&](double eta) {
    const ModePairMatrix m = two_photon_mode_distribution(u, both_ports_at_origin(u, eta));
    return 2.0 * m.probabilities(out_left, out_right);
  };
  const double baseline = distinct_ports(0.0);

  HomScan scan;
  scan.delays.assign(delays.begin(), delays.end());
  scan.coherence_time = coherence_time;
  scan.visibility = visibility;
  for (double tau : delays) {
    const double eta = hom_indistinguishability(tau, coherence_time, visibility);
    scan.indistinguishability.push_back(eta);
    scan.coincidences.push_back(baseline > 0.0 ? distinct_ports(eta) / baseline : 0.0);
  }
  return scan;
}

}  // namespace qwalk
