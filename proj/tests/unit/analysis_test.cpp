#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qwalk/ensemble.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/fit.hpp"

using namespace qwalk;

namespace {

Distribution ordered_step(int n) {
  return position_distribution(evolve(n, hadamard_coin(), PhaseMap::ordered(n), n).back());
}

std::vector<double> power_law(double c, double beta, int count) {
  std::vector<double> v;
  for (int n = 1; n <= count; ++n) v.push_back(c * std::pow(n, beta));
  return v;
}

DisorderSpec spec_for(double p, int steps = 7, std::uint64_t seed = 1) {
  DisorderSpec s;
  s.p = p;
  s.steps = steps;
  s.master_seed = seed;
  return s;
}

}  // namespace

TEST(Moments, VarianceExamples) {
  EXPECT_DOUBLE_EQ(variance({-1, {0.5, 0.0, 0.5}}), 1.0);
  EXPECT_DOUBLE_EQ(variance({-2, {0.25, 0.0, 0.5, 0.0, 0.25}}), 2.0);
  EXPECT_NEAR(variance(ordered_step(3)), 2.75, 1e-12);
}

TEST(Moments, MeanExamples) {
  EXPECT_DOUBLE_EQ(mean_position({-2, {0.25, 0.0, 0.5, 0.0, 0.25}}), 0.0);
  EXPECT_NEAR(mean_position(ordered_step(3)), -0.5, 1e-12);
  EXPECT_DOUBLE_EQ(mean_position({4, {1.0}}), 4.0);
  EXPECT_DOUBLE_EQ(variance({4, {1.0}}), 0.0);
}

TEST(Moments, RejectUnnormalised) {
  EXPECT_THROW(variance({0, {0.5, 0.4}}), DomainError);
  EXPECT_THROW(mean_position({0, {2.0}}), DomainError);
  EXPECT_THROW(variance({0, {1.5, -0.5}}), DomainError);
}

TEST(Similarity, Examples) {
  const Distribution g = ordered_step(5);
  EXPECT_NEAR(similarity(g, g), 1.0, 1e-15);
  EXPECT_EQ(similarity({-2, {1.0}}, {3, {1.0}}), 0.0);
  EXPECT_NEAR(similarity({0, {0.5, 0.5}}, {0, {1.0, 0.0}}), 0.5, 1e-15);
}

TEST(Similarity, AlignsSupportsBySite) {
  EXPECT_NEAR(similarity({0, {0.5, 0.5}}, {1, {1.0}}), 0.5, 1e-15);
  EXPECT_NEAR(similarity({-3, {0.0, 0.0, 0.5, 0.5}}, {-1, {0.5, 0.5, 0.0}}), 1.0, 1e-15);
}

TEST(Similarity, RejectsZeroOrNegative) {
  EXPECT_THROW(similarity({0, {0.0, 0.0}}, {0, {1.0}}), DomainError);
  EXPECT_THROW(similarity({0, {1.0, -0.1}}, {0, {1.0}}), DomainError);
}

TEST(Similarity, Properties) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Distribution a{-3, std::vector<double>(7)}, b{-1, std::vector<double>(5)};
    for (double& x : a.probabilities) x = u(rng);
    for (double& x : b.probabilities) x = u(rng);
    const double s = similarity(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(s, similarity(b, a), 1e-14);
    Distribution scaled = a;
    for (double& x : scaled.probabilities) x *= 3.7;
    EXPECT_NEAR(similarity(scaled, b), s, 1e-13);
    EXPECT_NEAR(similarity(a, scaled), 1.0, 1e-13);
  }
}

TEST(Classical, ReferenceExamples) {
  const Distribution d1 = crw_reference(1);
  EXPECT_EQ(d1.at(-1), 0.5);
  EXPECT_EQ(d1.at(1), 0.5);
  const Distribution d2 = crw_reference(2);
  EXPECT_EQ(d2.at(-2), 0.25);
  EXPECT_EQ(d2.at(0), 0.5);
  EXPECT_EQ(d2.at(2), 0.25);
}

TEST(Classical, MatchesBinomialOracle) {
  for (int n = 1; n <= 20; ++n) {
    const Distribution d = crw_reference(n);
    for (int i = -n; i <= n; ++i) {
      const double expected = (n + i) % 2 == 0 ? oracle::binomial_probability(n, (n + i) / 2) : 0.0;
      EXPECT_NEAR(d.at(i), expected, 1e-15);
    }
    EXPECT_NEAR(variance(d), n, 1e-12);
  }
}

TEST(Fit, ExactPowerLaws) {
  EXPECT_NEAR(fit_beta(power_law(1.0, 2.0, 7), {1, 7}).beta, 2.0, 1e-10);
  EXPECT_NEAR(fit_beta(power_law(3.0, 1.0, 7), {1, 7}).beta, 1.0, 1e-10);
  EXPECT_NEAR(fit_beta(power_law(3.0, 1.0, 7), {1, 7}).prefactor, 3.0, 1e-9);
}

TEST(Fit, ExactOverParameterRange) {
  for (FitMethod method : {FitMethod::power_law, FitMethod::log_log}) {
    for (double beta = 0.5; beta <= 2.5 + 1e-12; beta += 0.125) {
      for (double c : {0.01, 1.0, 42.0}) {
        const PowerLawFit f = fit_beta(power_law(c, beta, 20), {2, 15}, method);
        EXPECT_NEAR(f.beta, beta, 1e-10) << to_string(method) << " c=" << c;
        EXPECT_NEAR(f.beta_stderr, 0.0, 1e-8);
      }
    }
  }
}

TEST(Fit, OrderedWalkExponent) {
  const auto t = evolve(7, hadamard_coin(), PhaseMap::ordered(7), 7);
  std::vector<double> v;
  for (const auto& s : t) v.push_back(variance(position_distribution(s)));
  EXPECT_NEAR(fit_beta(v, {1, 7}).beta, 1.69, 0.01);
}

TEST(Fit, StandardErrorFromResiduals) {
  auto v = power_law(2.0, 1.5, 7);
  v[3] *= 1.1;
  const PowerLawFit f = fit_beta(v, {1, 7});
  EXPECT_GT(f.beta_stderr, 0.0);
  EXPECT_EQ(fit_beta(v, {3, 4}).beta_stderr, 0.0);
}

TEST(Fit, Errors) {
  const auto v = power_law(1.0, 2.0, 7);
  EXPECT_THROW(fit_beta(v, {3, 3}), DomainError);
  EXPECT_THROW(fit_beta(v, {1, 8}), DomainError);
  EXPECT_THROW(fit_beta(v, {0, 3}), DomainError);
  auto bad = v;
  bad[2] = 0.0;
  EXPECT_THROW(fit_beta(bad, {1, 7}), DomainError);
  EXPECT_NO_THROW(fit_beta(bad, {4, 7}));
}

TEST(Fit, MethodNames) {
  EXPECT_EQ(fit_method_from_string("log_log"), FitMethod::log_log);
  EXPECT_EQ(fit_method_from_string(to_string(FitMethod::power_law)), FitMethod::power_law);
  EXPECT_THROW(fit_method_from_string("cubic"), DomainError);
}

TEST(Ensemble, OrderedHasNoSpread) {
  for (int n_maps : {1, 2, 37}) {
    const EnsembleResult r = run_ensemble(spec_for(0.0), hadamard_coin(), n_maps, 2);
    for (double s : r.std_variance) EXPECT_EQ(s, 0.0);
    EXPECT_NEAR(r.mean_variance[2], 2.75, 1e-12);
  }
}

TEST(Ensemble, SingleMapStdIsZero) {
  const EnsembleResult r = run_ensemble(spec_for(0.5), hadamard_coin(), 1);
  for (double s : r.std_variance) EXPECT_EQ(s, 0.0);
}

TEST(Ensemble, MatchesDirectAverage) {
  const DisorderSpec s = spec_for(0.3, 6, 21);
  const EnsembleResult r = run_ensemble(s, hadamard_coin(), 25, 3);
  std::vector<double> sum(6, 0.0), sq(6, 0.0);
  for (int k = 0; k < 25; ++k) {
    const auto t = evolve(6, hadamard_coin(), generate_phase_map(s, static_cast<std::uint64_t>(k)), 6);
    for (int n = 0; n < 6; ++n) {
      const double v = variance(position_distribution(t[static_cast<std::size_t>(n)]));
      sum[static_cast<std::size_t>(n)] += v;
      sq[static_cast<std::size_t>(n)] += v * v;
    }
  }
  for (std::size_t n = 0; n < 6; ++n) {
    const double mean = sum[n] / 25.0;
    EXPECT_NEAR(r.mean_variance[n], mean, 1e-12);
    EXPECT_NEAR(r.std_variance[n], std::sqrt(std::max(0.0, (sq[n] - 25.0 * mean * mean) / 24.0)), 1e-9);
  }
}

TEST(Ensemble, ThreadCountDoesNotChangeResult) {
  const DisorderSpec s = spec_for(0.15, 9, 5);
  const EnsembleResult one = run_ensemble(s, hadamard_coin(), 250, 1);
  for (unsigned threads : {2u, 3u, 8u}) {
    const EnsembleResult many = run_ensemble(s, hadamard_coin(), 250, threads);
    EXPECT_EQ(one.mean_variance, many.mean_variance);
    EXPECT_EQ(one.std_variance, many.std_variance);
    EXPECT_EQ(one.mean_distribution, many.mean_distribution);
  }
}

TEST(Ensemble, EarlyStepsAreInsensitiveToDisorder) {
  for (double p : {0.05, 0.5, 1.0}) {
    const EnsembleResult r = run_ensemble(spec_for(p), hadamard_coin(), 100);
    EXPECT_NEAR(r.mean_variance[0], 1.0, 1e-12);
    EXPECT_NEAR(r.mean_variance[1], 2.0, 1e-12);
    EXPECT_NEAR(r.mean_variance[2], 2.75, 1e-12);
    for (int n = 0; n < 3; ++n) EXPECT_LE(r.std_variance[static_cast<std::size_t>(n)], 1e-12);
  }
}

TEST(Ensemble, IntermediateDilutionLiesBetweenLimits) {
  const EnsembleResult lo = run_ensemble(spec_for(0.0), hadamard_coin(), 1000);
  const EnsembleResult mid = run_ensemble(spec_for(0.1), hadamard_coin(), 1000);
  const EnsembleResult hi = run_ensemble(spec_for(1.0), hadamard_coin(), 1000);
  for (int n = 4; n <= 7; ++n) {
    const auto k = static_cast<std::size_t>(n - 1);
    EXPECT_LT(mid.mean_variance[k], lo.mean_variance[k]);
    EXPECT_GT(mid.mean_variance[k], hi.mean_variance[k]);
  }
}

TEST(Ensemble, FullDisorderApproachesBinomial) {
  const EnsembleResult r = run_ensemble(spec_for(1.0), hadamard_coin(), 1000);
  EXPECT_GE(similarity(r.mean_distribution.back(), crw_reference(7)), 0.99);
}

TEST(Ensemble, Validation) {
  EXPECT_THROW(run_ensemble(spec_for(0.1), hadamard_coin(), 0), DomainError);
  EXPECT_THROW(run_ensemble(spec_for(1.1), hadamard_coin(), 5), DomainError);
}

TEST(Crossing, SymmetricLines) {
  std::vector<double> grid, s0, s1;
  for (int k = 0; k <= 10; ++k) {
    const double p = k / 10.0;
    grid.push_back(p);
    s0.push_back(1.0 - p);
    s1.push_back(p);
  }
  const CrossingPoint c = crossing_point(grid, s0, s1, 7);
  EXPECT_NEAR(c.p_star, 0.5, 1e-12);
  EXPECT_EQ(c.step_n, 7);
  EXPECT_TRUE(c.low_resolution);
}

TEST(Crossing, InterpolatesInsideBracket) {
  const std::vector<double> grid{0.0, 0.01, 0.02, 0.03};
  const std::vector<double> s0{1.0, 0.9, 0.8, 0.7};
  const std::vector<double> s1{0.5, 0.7, 0.85, 0.9};
  const CrossingPoint c = crossing_point(grid, s0, s1, 5);
  // d = 0.5, 0.2, -0.05: crossing at 0.01 + 0.01 * 0.2 / 0.25
  EXPECT_NEAR(c.p_star, 0.018, 1e-12);
  EXPECT_FALSE(c.low_resolution);
}

TEST(Crossing, CoarseGridIsFlagged) {
  const CrossingPoint c = crossing_point(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 0.2},
                                         std::vector<double>{0.3, 1.0}, 6);
  EXPECT_NEAR(c.p_star, 0.7 / 1.5, 1e-12);
  EXPECT_TRUE(c.low_resolution);
}

TEST(Crossing, AmbiguousCurvesThrow) {
  const std::vector<double> grid{0.0, 0.5, 1.0};
  EXPECT_THROW(crossing_point(grid, std::vector<double>{1.0, 0.9, 0.8}, std::vector<double>{0.1, 0.2, 0.3}, 7),
               AmbiguityError);
  EXPECT_THROW(crossing_point(grid, std::vector<double>{1.0, 0.1, 0.9}, std::vector<double>{0.5, 0.5, 0.5}, 7),
               AmbiguityError);
}

TEST(Crossing, RejectsMismatchedCurves) {
  EXPECT_ANY_THROW(crossing_point(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0},
                                  std::vector<double>{0.0, 1.0}, 7));
}

TEST(Scan, EndpointsAreSelfSimilar) {
  const std::vector<double> grid{0.0, 0.25, 0.5, 1.0};
  const SimilarityScan scan = similarity_scan(grid, spec_for(0.0), hadamard_coin(), 200);
  for (int n = 1; n <= 7; ++n) {
    EXPECT_NEAR(scan.to_ordered[static_cast<std::size_t>(n - 1)].front(), 1.0, 1e-12);
    EXPECT_NEAR(scan.to_disordered[static_cast<std::size_t>(n - 1)].back(), 1.0, 1e-12);
  }
  const auto& s0 = scan.to_ordered[6];
  const auto& s1 = scan.to_disordered[6];
  for (std::size_t k = 1; k < grid.size(); ++k) {
    EXPECT_LE(s0[k], s0[k - 1] + 0.01);
    EXPECT_GE(s1[k], s1[k - 1] - 0.01);
  }
}

TEST(Scan, ReferencesComputedWhenMissingFromGrid) {
  const std::vector<double> grid{0.2, 0.4};
  const SimilarityScan partial = similarity_scan(grid, spec_for(0.0), hadamard_coin(), 50);
  const std::vector<double> full_grid{0.0, 0.2, 0.4, 1.0};
  const SimilarityScan full = similarity_scan(full_grid, spec_for(0.0), hadamard_coin(), 50);
  for (std::size_t n = 0; n < 7; ++n) {
    EXPECT_EQ(partial.to_ordered[n][0], full.to_ordered[n][1]);
    EXPECT_EQ(partial.to_disordered[n][1], full.to_disordered[n][2]);
  }
}
