#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "boltzmann/entropy.hpp"
#include "boltzmann/equilibrium.hpp"
#include "test_support.hpp"

namespace boltzmann {
namespace {

const double kLn2 = std::log(2.0);

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

// Oracle: the textbook formula without any shifting, valid for moderate beta.
std::vector<double> naive_distribution(const EnergySpectrum& e, const ProbabilityVector& prior,
                                       double beta) {
  std::vector<double> w(e.size());
  double z = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) z += (w[i] = prior[i] * std::exp(-beta * e[i]));
  for (auto& x : w) x /= z;
  return w;
}

TEST(BoltzmannDistribution, TwoLevelExamples) {
  const EnergySpectrum e({0, 1});
  const auto hot = boltzmann_distribution(e, 0.0);
  EXPECT_EQ(hot.distribution[0], 0.5);
  EXPECT_NEAR(hot.log_partition, kLn2, 1e-15);

  const auto one = boltzmann_distribution(e, 1.0);
  EXPECT_NEAR(one.distribution[0], 0.731058578630004879, 1e-15);
  EXPECT_NEAR(one.distribution[1], 0.268941421369995121, 1e-15);
  EXPECT_NEAR(std::exp(one.log_partition), 1.367879441171442322, 1e-15);
  EXPECT_NEAR(one.mean_energy, 0.268941421369995121, 1e-15);

  const auto cold = boltzmann_distribution(e, 50.0);
  EXPECT_NEAR(cold.distribution[0], 1.0, 1e-20);
  EXPECT_LT(cold.distribution[1], 1e-20);
}

TEST(BoltzmannDistribution, SurvivesExtremeBeta) {
  const EnergySpectrum e({-3, 0, 5});
  for (const double beta : {-1e4, -800.0, 800.0, 1e4}) {
    const auto s = boltzmann_distribution(e, beta);
    double sum = 0.0;
    for (const double p : s.distribution.entries()) {
      EXPECT_TRUE(std::isfinite(p));
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-15);
    EXPECT_TRUE(std::isfinite(s.log_partition));
  }
  // ln Z = -beta E_min + ln(1 + ...) at large beta
  EXPECT_NEAR(boltzmann_distribution(e, 1e4).log_partition, 3e4, 1e-9);
}

TEST(GeneralizedDistribution, Examples) {
  const EnergySpectrum e({0, 1});
  const ProbabilityVector third({1.0 / 3, 2.0 / 3});
  const auto at_zero = generalized_distribution(e, third, 0.0);
  EXPECT_NEAR(at_zero.distribution[0], 1.0 / 3, 1e-15);
  EXPECT_NEAR(at_zero.distribution[1], 2.0 / 3, 1e-15);
  EXPECT_NEAR(at_zero.log_partition, 0.0, 1e-15);

  // weights (1/3, (2/3) e^{-1}), normalized
  const auto at_one = generalized_distribution(e, third, 1.0);
  EXPECT_NEAR(at_one.distribution[0], 0.576116884765829110, 1e-15);
  EXPECT_NEAR(at_one.distribution[1], 0.423883115234170890, 1e-15);
}

TEST(GeneralizedDistribution, ZeroPriorLevelsStayEmpty) {
  const EnergySpectrum e({-100, 0, 1});
  const ProbabilityVector prior({0.0, 0.5, 0.5});
  const auto s = generalized_distribution(e, prior, 20.0);
  EXPECT_EQ(s.distribution[0], 0.0);
  EXPECT_NEAR(s.distribution[1] + s.distribution[2], 1.0, 1e-15);
}

TEST(GeneralizedDistribution, TinyPriorOnDominantLevelFallsBackToLogSpace) {
  const EnergySpectrum e({0, 1000});
  const ProbabilityVector prior({1e-300, 1.0 - 1e-300});
  const auto s = generalized_distribution(e, prior, 1.0);
  // ln weights: -690.8 vs -1000, so level 0 still wins.
  EXPECT_NEAR(s.distribution[0], 1.0, 1e-12);
}

TEST(GeneralizedDistribution, MatchesNaiveFormula) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> beta_draw(-3.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto e = testing::random_spectrum(rng, n);
    const auto prior = testing::random_simplex(rng, n);
    const double beta = beta_draw(rng);
    const auto s = generalized_distribution(e, prior, beta);
    const auto oracle = naive_distribution(e, prior, beta);
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(s.distribution[i], oracle[i], 1e-13);
      z += prior[i] * std::exp(-beta * e[i]);
    }
    EXPECT_NEAR(s.log_partition, std::log(z), 1e-12);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += s.distribution[i] * e[i];
    EXPECT_NEAR(s.mean_energy, mean, 1e-12);
    EXPECT_NEAR(s.entropy_per_particle, shannon_entropy(s.distribution).value, 1e-14);
  }
}

TEST(GeneralizedDistribution, UniformPriorReducesToBoltzmann) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> beta_draw(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const auto e = testing::random_spectrum(rng, n);
    const double beta = beta_draw(rng);
    const auto plain = boltzmann_distribution(e, beta);
    const auto weighted = generalized_distribution(e, uniform_prior(n), beta);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(plain.distribution[i], weighted.distribution[i], 1e-14);
    }
    // The 1/n prior factor shows up only in the partition function.
    EXPECT_NEAR(plain.log_partition - weighted.log_partition, std::log(double(n)), 1e-12);
  }
}

TEST(GeneralizedDistribution, ZeroBetaReturnsPrior) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 9;
    const auto prior = testing::random_simplex(rng, n);
    const auto s = generalized_distribution(testing::random_spectrum(rng, n), prior, 0.0);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(s.distribution[i], prior[i], 1e-14);
  }
}

TEST(GeneralizedDistribution, ShiftInvariance) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> draw(-4.0, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto e = testing::random_spectrum(rng, n);
    const auto prior = testing::random_simplex(rng, n);
    const double beta = draw(rng);
    const double c = draw(rng);
    std::vector<double> shifted(n);
    for (std::size_t i = 0; i < n; ++i) shifted[i] = e[i] + c;
    const auto a = generalized_distribution(e, prior, beta);
    const auto b = generalized_distribution(EnergySpectrum(shifted), prior, beta);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(a.distribution[i], b.distribution[i], 1e-12);
    }
    EXPECT_NEAR(b.mean_energy - a.mean_energy, c, 1e-12);
  }
}

TEST(GeneralizedDistribution, MeanEnergyStrictlyDecreasesInBeta) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto e = testing::random_spectrum(rng, n);
    const auto prior = testing::random_simplex(rng, n);
    double previous = std::numeric_limits<double>::infinity();
    for (double beta = -4.0; beta <= 4.0; beta += 0.25) {
      const auto s = generalized_distribution(e, prior, beta);
      EXPECT_LT(s.mean_energy, previous);
      // d<E>/d beta = -Var(E): central-difference oracle.
      const double h = 1e-5;
      const double slope = (generalized_distribution(e, prior, beta + h).mean_energy -
                            generalized_distribution(e, prior, beta - h).mean_energy) /
                           (2 * h);
      double variance = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        variance += s.distribution[i] * std::pow(e[i] - s.mean_energy, 2);
      }
      EXPECT_NEAR(slope, -variance, 1e-6);
      previous = s.mean_energy;
    }
  }
}

TEST(GeneralizedDistribution, Errors) {
  EXPECT_EQ(code_of([] {
              generalized_distribution(EnergySpectrum({0, 1}), uniform_prior(3), 1.0);
            }),
            ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of([] {
              generalized_distribution(EnergySpectrum({0, 1e300}), uniform_prior(2), -1e300);
            }),
            ErrorCode::DegeneratePrior);
}

TEST(SolveBeta, Examples) {
  const EnergySpectrum e({0, 1});
  const auto prior = uniform_prior(2);
  EXPECT_EQ(solve_beta(e, prior, 0.5).beta, 0.0);
  EXPECT_NEAR(solve_beta(e, prior, 0.268941421369995121).beta, 1.0, 1e-9);
  EXPECT_NEAR(solve_beta(e, prior, 0.731058578630004879).beta, -1.0, 1e-9);
}

TEST(SolveBeta, Errors) {
  const EnergySpectrum e({0, 1});
  EXPECT_EQ(code_of([&] { solve_beta(e, uniform_prior(2), 1.5); }), ErrorCode::TargetOutOfRange);
  EXPECT_EQ(code_of([&] { solve_beta(e, uniform_prior(2), 1.0); }), ErrorCode::TargetOutOfRange);
  EXPECT_EQ(code_of([&] { solve_beta(e, uniform_prior(2), 0.0); }), ErrorCode::TargetOutOfRange);
  // Support restricted by the prior.
  const ProbabilityVector half({0.5, 0.5, 0.0});
  const EnergySpectrum three({0, 1, 2});
  EXPECT_EQ(code_of([&] { solve_beta(three, half, 1.5); }), ErrorCode::TargetOutOfRange);
  EXPECT_NEAR(solve_beta(three, half, 0.5).beta, 0.0, 1e-12);
  // All supported levels at one energy.
  const EnergySpectrum flat({2, 2, 5});
  const ProbabilityVector left({0.3, 0.7, 0.0});
  EXPECT_EQ(code_of([&] { solve_beta(flat, left, 2.5); }), ErrorCode::NoVariation);
  EXPECT_EQ(solve_beta(flat, left, 2.0).distribution[1], 0.7);
}

TEST(SolveBeta, RoundTrip) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto e = testing::random_spectrum(rng, n);
    const auto prior = testing::random_simplex(rng, n);
    for (const double beta : {-5.0, -2.5, -1.0, -0.1, 0.0, 0.3, 1.0, 2.0, 5.0}) {
      const double target = generalized_distribution(e, prior, beta).mean_energy;
      const auto solved = solve_beta(e, prior, target);
      EXPECT_NEAR(solved.beta, beta, 1e-8);
      double lo = e[0], hi = e[0];
      for (const double x : e.levels()) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      EXPECT_LE(std::abs(solved.mean_energy - target), 1e-10 * (hi - lo));
    }
  }
}

TEST(SolveBeta, FarTargetsExpandTheBracket) {
  const EnergySpectrum e({0, 1});
  const auto s = solve_beta(e, uniform_prior(2), 1e-12);
  EXPECT_NEAR(s.beta, std::log((1 - 1e-12) / 1e-12), 1e-4);
}

TEST(EquilibriumEntropyUniform, Examples) {
  EXPECT_NEAR(equilibrium_entropy_uniform(EnergySpectrum({0, 0}), 3.7, 1), 2 * kLn2, 1e-15);
  EXPECT_NEAR(equilibrium_entropy_uniform(EnergySpectrum({0, 1}), 0.0, 1), 2 * kLn2, 1e-15);
  // 10 (ln 2 + 0.268941... + ln 1.367879...)
  EXPECT_NEAR(equilibrium_entropy_uniform(EnergySpectrum({0, 1}), 1.0, 10),
              12.753502894481632642, 1e-12);
}

TEST(EquilibriumEntropyUniform, ExceedsGibbsEntropyByLogLevels) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto e = testing::random_spectrum(rng, n);
    const double beta = (trial % 11) - 5.0;
    const auto plain = boltzmann_distribution(e, beta);
    const double published = equilibrium_entropy_uniform(e, beta, 7, 2.0);
    const double gibbs = gibbs_entropy(plain.distribution, 7, 2.0);
    EXPECT_NEAR(published - gibbs, 2.0 * 7 * std::log(double(n)), 1e-10);
  }
}

TEST(EquilibriumEntropyPrior, Examples) {
  const EnergySpectrum e({0, 1});
  // H(1/3, 2/3) with Z_w = 1 at beta = 0
  EXPECT_NEAR(equilibrium_entropy_prior(e, ProbabilityVector({1.0 / 3, 2.0 / 3}), 0.0, 1),
              0.636514168294812818, 1e-15);
  EXPECT_EQ(code_of([&] { equilibrium_entropy_prior(e, ProbabilityVector({1, 0}), 0.0, 1); }),
            ErrorCode::ZeroPriorEntry);
}

TEST(EquilibriumEntropyPrior, UniformPriorDiffersFromEqualPriorFormulaByLogLevels) {
  // Prior-weighted partition: ln Z_w = ln Z - ln n.
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto e = testing::random_spectrum(rng, n);
    const double beta = (trial % 7) - 3.0;
    const double uniform = equilibrium_entropy_uniform(e, beta, 3, 1.5);
    const double prior = equilibrium_entropy_prior(e, uniform_prior(n), beta, 3, 1.5);
    EXPECT_NEAR(uniform - prior, 1.5 * 3 * std::log(double(n)), 1e-10);
  }
}

TEST(EquilibriumEntropyPrior, EqualsMinusKlOfDistributionPlusPriorEntropy) {
  // beta <E> + ln Z_w = -D(p || p0) for p the generalized distribution.
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const auto e = testing::random_spectrum(rng, n);
    const auto prior = testing::random_simplex(rng, n);
    const double beta = ((trial % 13) - 6) * 0.5;
    const auto s = generalized_distribution(e, prior, beta);
    const double expected =
        shannon_entropy(prior).value - kl_divergence(s.distribution, prior);
    EXPECT_NEAR(equilibrium_entropy_prior(e, prior, beta, 1), expected, 1e-11);
  }
}

TEST(EntropyInequality, Examples) {
  const EnergySpectrum e({0, 1});
  const auto uniform = entropy_inequality_check(e, uniform_prior(2), 0.7, 5);
  EXPECT_TRUE(uniform.holds);
  EXPECT_NEAR(uniform.s_uniform, uniform.s_prior, 1e-12);

  for (const double beta : {-2.0, 0.0, 1.0, 3.0}) {
    const auto skewed = entropy_inequality_check(e, ProbabilityVector({0.9, 0.1}), beta, 1);
    EXPECT_TRUE(skewed.holds);
    // ln 2 - H(0.9, 0.1)
    EXPECT_NEAR(skewed.s_uniform - skewed.s_prior, kLn2 - 0.325082973391448240, 1e-14);
  }
  const auto third = entropy_inequality_check(e, ProbabilityVector({1.0 / 3, 2.0 / 3}), 1.0, 1);
  EXPECT_TRUE(third.holds);
  EXPECT_NEAR(third.s_uniform - third.s_prior, kLn2 - 0.636514168294812818, 1e-14);
  EXPECT_NEAR(third.s_prior_standalone,
              equilibrium_entropy_prior(e, ProbabilityVector({1.0 / 3, 2.0 / 3}), 1.0, 1), 0.0);
}

TEST(EntropyInequality, HoldsOnRandomDraws) {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> beta_draw(-5.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const auto e = testing::random_spectrum(rng, n);
    const auto prior = testing::random_simplex(rng, n);
    const auto r = entropy_inequality_check(e, prior, beta_draw(rng), 1 + trial % 100, 1.0);
    EXPECT_TRUE(r.holds);
    if (shannon_entropy(prior).value < std::log(double(n)) - 1e-6) {
      EXPECT_GT(r.s_uniform, r.s_prior);
    }
  }
}

}  // namespace
}  // namespace boltzmann
