#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "maps.hpp"
#include "oracles.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/two_photon.hpp"

using namespace qwalk;
using testing_support::map_from_rows;
using testing_support::random_map;

namespace {

ModePairMatrix pair_after(int steps, double r, const PhaseMap& map, double eta) {
  const ModeUnitary u = single_particle_unitary(steps, coin_from_reflectivity(r), map, steps);
  return two_photon_mode_distribution(u, both_ports_at_origin(u, eta));
}

// Ensemble-mean coincidence matrix over `n_maps` maps at dilution p.
CoincidenceMatrix mean_coincidences(int steps, double r, double p, int n_maps) {
  CoincidenceMatrix mean;
  for (int k = 0; k < n_maps; ++k) {
    DisorderSpec spec;
    spec.p = p;
    spec.steps = steps;
    const CoincidenceMatrix cm =
        site_coincidences(pair_after(steps, r, generate_phase_map(spec, static_cast<std::uint64_t>(k)), 1.0));
    if (k == 0) {
      mean = cm;
    } else {
      mean.probabilities += cm.probabilities;
    }
  }
  mean.probabilities /= n_maps;
  return mean;
}

}  // namespace

TEST(PairStatistics, BalancedSplitterBunches) {
  const ModePairMatrix m = pair_after(1, 0.5, PhaseMap::ordered(1), 1.0);
  const ModeUnitary u = single_particle_unitary(1, hadamard_coin(), PhaseMap::ordered(1), 1);
  const int left = u.mode_index(-1, 0), right = u.mode_index(1, 1);
  EXPECT_NEAR(m.probabilities(left, right), 0.0, 1e-15);
  EXPECT_NEAR(m.probabilities(left, left), 0.5, 1e-15);
  EXPECT_NEAR(m.probabilities(right, right), 0.5, 1e-15);
}

TEST(PairStatistics, UnbalancedSplitterCoincidence) {
  const ModePairMatrix m = pair_after(1, 0.45, PhaseMap::ordered(1), 1.0);
  const ModeUnitary u = single_particle_unitary(1, coin_from_reflectivity(0.45), PhaseMap::ordered(1), 1);
  const int left = u.mode_index(-1, 0), right = u.mode_index(1, 1);
  EXPECT_NEAR(2.0 * m.probabilities(left, right), 0.01, 1e-14);
}

TEST(PairStatistics, DistinguishableEqualsProductOfSingleRuns) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PhaseMap map = random_map(5, 0.4, seed);
    const ModePairMatrix m = pair_after(5, 0.45, map, 0.0);
    const CoinOperator coin = coin_from_reflectivity(0.45);
    const WalkState a = evolve(5, coin, map, 5, {1.0, 0.0}).back();
    const WalkState b = evolve(5, coin, map, 5, {0.0, 1.0}).back();
    const auto pa = a.amplitudes(), pb = b.amplitudes();
    for (int k = 0; k < static_cast<int>(pa.size()); ++k) {
      for (int l = 0; l < static_cast<int>(pa.size()); ++l) {
        const double ak = std::norm(pa[static_cast<std::size_t>(k)]), al = std::norm(pa[static_cast<std::size_t>(l)]);
        const double bk = std::norm(pb[static_cast<std::size_t>(k)]), bl = std::norm(pb[static_cast<std::size_t>(l)]);
        const double expected = k == l ? ak * bk : 0.5 * (ak * bl + al * bk);
        ASSERT_NEAR(m.probabilities(k, l), expected, 1e-12) << k << "," << l;
      }
    }
  }
}

TEST(PairStatistics, MatchesFockSpaceOracle) {
  for (int steps = 1; steps <= 3; ++steps) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      for (double r : {0.5, 0.45}) {
        const auto rows = oracle::random_rows(steps, seed * 31 + static_cast<std::uint64_t>(steps));
        const ModeUnitary u = single_particle_unitary(steps, coin_from_reflectivity(r), map_from_rows(rows), steps);
        const PairInput in = both_ports_at_origin(u, 1.0);
        const ModePairMatrix m = two_photon_mode_distribution(u, in);
        const auto ref = oracle::fock_pair_distribution(steps, r, rows, steps, in.mode_a, in.mode_b);
        for (int k = 0; k < u.mode_count(); ++k) {
          EXPECT_NEAR(m.probabilities(k, k), ref[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)], 1e-10);
          for (int l = k + 1; l < u.mode_count(); ++l)
            EXPECT_NEAR(m.probabilities(k, l) + m.probabilities(l, k),
                        ref[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)], 1e-10);
        }
      }
    }
  }
}

TEST(PairStatistics, SymmetricAndNormalised) {
  for (double eta : {0.0, 0.3, 1.0}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const ModePairMatrix m = pair_after(6, 0.45, random_map(6, 0.5, seed), eta);
      EXPECT_EQ(m.probabilities, m.probabilities.transpose());
      EXPECT_NEAR(m.probabilities.sum(), 1.0, 1e-12);
      EXPECT_GE(m.probabilities.minCoeff(), 0.0);
    }
  }
}

TEST(PairStatistics, Validation) {
  const ModeUnitary u = single_particle_unitary(2, hadamard_coin(), PhaseMap::ordered(2), 2);
  EXPECT_THROW(two_photon_mode_distribution(u, {3, 3, 1.0}), DomainError);
  EXPECT_THROW(two_photon_mode_distribution(u, {0, 1, 1.5}), DomainError);
  EXPECT_THROW(two_photon_mode_distribution(u, {0, 99, 1.0}), DomainError);
  ModeUnitary bad = u;
  bad.matrix(0, 0) *= 1.01;
  EXPECT_THROW(two_photon_mode_distribution(bad, {0, 1, 1.0}), DomainError);
}

TEST(Coincidences, StepOneConcentratesOnEqualSites) {
  const CoincidenceMatrix cm = site_coincidences(pair_after(1, 0.5, PhaseMap::ordered(1), 1.0));
  EXPECT_NEAR(cm.at(-1, -1), 0.5, 1e-15);
  EXPECT_NEAR(cm.at(1, 1), 0.5, 1e-15);
  EXPECT_NEAR(cm.at(-1, 1), 0.0, 1e-15);
  EXPECT_NEAR(cm.at(1, -1), 0.0, 1e-15);
}

TEST(Coincidences, DistinguishableIsOuterProductOfMarginals) {
  const PhaseMap map = random_map(4, 0.3, 8);
  const CoincidenceMatrix cm = site_coincidences(pair_after(4, 0.5, map, 0.0));
  const Distribution a = position_distribution(evolve(4, hadamard_coin(), map, 4, {1.0, 0.0}).back());
  const Distribution b = position_distribution(evolve(4, hadamard_coin(), map, 4, {0.0, 1.0}).back());
  for (int i = -4; i <= 4; ++i)
    for (int j = -4; j <= 4; ++j) {
      const double expected = i == j ? a.at(i) * b.at(i) : 0.5 * (a.at(i) * b.at(j) + a.at(j) * b.at(i));
      EXPECT_NEAR(cm.at(i, j), expected, 1e-12);
    }
}

TEST(Coincidences, PreservesNormalisation) {
  const ModePairMatrix m = pair_after(5, 0.45, random_map(5, 0.2, 4), 0.6);
  const CoincidenceMatrix cm = site_coincidences(m);
  EXPECT_NEAR(cm.total(), m.probabilities.sum(), 1e-14);
  EXPECT_EQ(cm.probabilities, cm.probabilities.transpose());
}

TEST(Coincidences, DisplayNormalisation) {
  const CoincidenceMatrix cm = site_coincidences(pair_after(3, 0.5, PhaseMap::ordered(3), 1.0));
  const CoincidenceMatrix d = normalized_to_max(cm);
  EXPECT_EQ(d.probabilities.maxCoeff(), 1.0);
  EXPECT_NEAR(d.probabilities.sum() * cm.probabilities.maxCoeff(), 1.0, 1e-12);
}

TEST(PairVariance, Examples) {
  CoincidenceMatrix point{-1, Eigen::MatrixXd::Zero(3, 3)};
  point.probabilities(1, 1) = 1.0;
  EXPECT_EQ(variance2(point), 0.0);

  CoincidenceMatrix split{-1, Eigen::MatrixXd::Zero(3, 3)};
  split.probabilities(0, 0) = 0.5;
  split.probabilities(2, 2) = 0.5;
  EXPECT_DOUBLE_EQ(variance2(split), 1.0);

  CoincidenceMatrix pair{-1, Eigen::MatrixXd::Zero(3, 3)};
  pair.probabilities(0, 2) = 0.5;
  pair.probabilities(2, 0) = 0.5;
  EXPECT_DOUBLE_EQ(variance2(pair), 0.0);

  CoincidenceMatrix half{-1, Eigen::MatrixXd::Zero(3, 3)};
  half.probabilities(0, 0) = 0.5;
  EXPECT_THROW(variance2(half), DomainError);
}

TEST(PairVariance, DilutedHardwareWalkLiesBetweenLimits) {
  const double ordered = variance2(mean_coincidences(5, 0.45, 0.0, 1));
  const double diluted = variance2(mean_coincidences(5, 0.45, 0.1, 400));
  const double random = variance2(mean_coincidences(5, 0.45, 1.0, 400));
  EXPECT_LT(diluted, ordered);
  EXPECT_GT(diluted, random);
}

TEST(Marginal, StepOneIdealPair) {
  const Distribution d = pair_marginal(site_coincidences(pair_after(1, 0.5, PhaseMap::ordered(1), 1.0)));
  EXPECT_NEAR(d.at(-1), 0.5, 1e-15);
  EXPECT_NEAR(d.at(1), 0.5, 1e-15);
  EXPECT_NEAR(d.total(), 1.0, 1e-15);
}

TEST(Marginal, DistinguishableAveragesSinglePhotonDistributions) {
  const PhaseMap map = random_map(6, 0.5, 2);
  const Distribution d = pair_marginal(site_coincidences(pair_after(6, 0.5, map, 0.0)));
  const Distribution a = position_distribution(evolve(6, hadamard_coin(), map, 6, {1.0, 0.0}).back());
  const Distribution b = position_distribution(evolve(6, hadamard_coin(), map, 6, {0.0, 1.0}).back());
  for (int i = -6; i <= 6; ++i) EXPECT_NEAR(d.at(i), 0.5 * (a.at(i) + b.at(i)), 1e-12);
  EXPECT_NEAR(d.total(), 1.0, 1e-12);
}

TEST(Marginal, IdenticalDistinguishableInputs) {
  // Photon in (0, c0) and photon in (0, c1) after a pure-reflection coin move to
  // opposite sides with certainty; the marginal splits evenly.
  const Distribution d = pair_marginal(site_coincidences(pair_after(3, 1.0, PhaseMap::ordered(3), 0.0)));
  EXPECT_NEAR(d.at(-3), 0.5, 1e-15);
  EXPECT_NEAR(d.at(3), 0.5, 1e-15);
}

TEST(Hom, GaussianIndistinguishability) {
  EXPECT_DOUBLE_EQ(hom_indistinguishability(0.0, 2.0, 0.93), 0.93);
  EXPECT_NEAR(hom_indistinguishability(2.0, 2.0, 0.93), 0.93 * std::exp(-1.0), 1e-15);
}

TEST(Hom, IdealDipReachesZero) {
  const std::vector<double> delays{-50.0, -1.0, 0.0, 1.0, 50.0};
  const HomScan s = hom_scan(delays, 1.0, 1.0, hadamard_coin());
  EXPECT_NEAR(s.coincidences[2], 0.0, 1e-15);
  EXPECT_NEAR(s.coincidences.front(), 1.0, 1e-12);
  EXPECT_NEAR(s.coincidences.back(), 1.0, 1e-12);
  EXPECT_NEAR(s.coincidences[1], 1.0 - std::exp(-1.0), 1e-12);
}

TEST(Hom, PartialVisibilityFloor) {
  const std::vector<double> delays{0.0};
  EXPECT_NEAR(hom_scan(delays, 1.0, 0.93, hadamard_coin()).coincidences[0], 0.07, 1e-12);
}

TEST(Hom, UnbalancedSplitterFloor) {
  const std::vector<double> delays{0.0};
  const double baseline = 0.45 * 0.45 + 0.55 * 0.55;
  for (double v : {1.0, 0.93}) {
    const double expected = 1.0 - v * (1.0 - 0.01 / baseline);
    EXPECT_NEAR(hom_scan(delays, 1.0, v, coin_from_reflectivity(0.45)).coincidences[0], expected, 1e-12);
  }
}

TEST(Hom, MinimumAtZeroDelay) {
  std::vector<double> delays;
  for (int k = -30; k <= 30; ++k) delays.push_back(0.1 * k);
  const HomScan s = hom_scan(delays, 0.8, 0.93, coin_from_reflectivity(0.45));
  for (double c : s.coincidences) {
    EXPECT_GE(c, s.coincidences[30]);
    EXPECT_GE(c, 0.0);
  }
}

TEST(Hom, Validation) {
  const std::vector<double> delays{0.0};
  EXPECT_THROW(hom_scan(delays, 0.0, 0.9, hadamard_coin()), DomainError);
  EXPECT_THROW(hom_scan(delays, 1.0, 1.2, hadamard_coin()), DomainError);
}
