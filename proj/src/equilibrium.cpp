#include "boltzmann/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "boltzmann/entropy.hpp"

namespace boltzmann {

namespace {

constexpr int kBisectionIterations = 200;
constexpr double kBetaLimit = 1e300;

struct WeightedExponentials {
  std::vector<double> probabilities;
  double log_partition;
};

// Normalizes weight_i * exp(-beta E_i). Levels with zero weight are skipped
// when choosing the shift, so they can neither overflow nor dominate.
WeightedExponentials normalize(const EnergySpectrum& spectrum,
                               std::span<const double> weights, double beta) {
  const std::size_t n = spectrum.size();
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] > 0.0) shift = std::max(shift, -beta * spectrum[i]);
  }
  if (!std::isfinite(shift)) {
    throw Error(ErrorCode::DegeneratePrior, "no level carries a finite Boltzmann weight");
  }

  std::vector<double> w(n, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] > 0.0) {
      w[i] = weights[i] * std::exp(-beta * spectrum[i] - shift);
      sum += w[i];
    }
  }
  double log_partition = shift + std::log(sum);

  if (!(sum > 1e-280)) {
    // Tiny weights on the dominant exponentials: redo fully in log space.
    double log_shift = -std::numeric_limits<double>::infinity();
    std::vector<double> log_w(n, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      if (weights[i] > 0.0) {
        log_w[i] = std::log(weights[i]) - beta * spectrum[i] - shift;
        log_shift = std::max(log_shift, log_w[i]);
      }
    }
    sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = weights[i] > 0.0 ? std::exp(log_w[i] - log_shift) : 0.0;
      sum += w[i];
    }
    log_partition = shift + log_shift + std::log(sum);
  }
  if (!(sum > 0.0) || !std::isfinite(log_partition)) {
    throw Error(ErrorCode::DegeneratePrior, "Boltzmann weights underflow to zero");
  }
  for (double& wi : w) wi /= sum;
  return {std::move(w), log_partition};
}

EquilibriumSolution make_solution(const EnergySpectrum& spectrum, double beta,
                                  WeightedExponentials weighted) {
  ProbabilityVector distribution(std::move(weighted.probabilities));
  double mean = 0.0;
  double gibbs = 0.0;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    mean += distribution[i] * spectrum[i];
    gibbs -= x_log_x(distribution[i]);
  }
  return {beta, weighted.log_partition, std::move(distribution), mean,
          gibbs == 0.0 ? 0.0 : gibbs};
}

void check_beta(double beta) {
  if (!std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be finite");
  }
}

void check_lengths(const EnergySpectrum& spectrum, const ProbabilityVector& prior) {
  if (spectrum.size() != prior.size()) {
    throw Error(ErrorCode::LengthMismatch, "prior and spectrum differ in length");
  }
}

}  // namespace

EquilibriumSolution boltzmann_distribution(const EnergySpectrum& spectrum, double beta) {
  check_beta(beta);
  const std::vector<double> ones(spectrum.size(), 1.0);
  return make_solution(spectrum, beta, normalize(spectrum, ones, beta));
}

EquilibriumSolution generalized_distribution(const EnergySpectrum& spectrum,
                                             const ProbabilityVector& prior, double beta) {
  check_beta(beta);
  check_lengths(spectrum, prior);
  return make_solution(spectrum, beta, normalize(spectrum, prior.entries(), beta));
}

EquilibriumSolution solve_beta(const EnergySpectrum& spectrum,
                               const ProbabilityVector& prior, double target) {
  check_lengths(spectrum, prior);
  if (!std::isfinite(target)) {
    throw Error(ErrorCode::TargetOutOfRange, "target energy is not finite");
  }
  double e_min = std::numeric_limits<double>::infinity();
  double e_max = -e_min;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (prior[i] > 0.0) {
      e_min = std::min(e_min, spectrum[i]);
      e_max = std::max(e_max, spectrum[i]);
    }
  }

  if (e_min == e_max) {
    if (std::abs(target - e_min) <= 1e-12 * std::max(1.0, std::abs(e_min))) {
      return generalized_distribution(spectrum, prior, 0.0);
    }
    throw Error(ErrorCode::NoVariation,
                "all supported levels share energy " + std::to_string(e_min));
  }
  if (target <= e_min || target >= e_max) {
    throw Error(ErrorCode::TargetOutOfRange,
                "target " + std::to_string(target) + " outside (" + std::to_string(e_min) +
                    ", " + std::to_string(e_max) + ")");
  }

  const double tolerance = 1e-10 * (e_max - e_min);
  auto excess = [&](double beta) {
    return generalized_distribution(spectrum, prior, beta).mean_energy - target;
  };

  // The mean energy decreases in beta: grow the bracket until it straddles.
  double lo = -1.0;
  double hi = 1.0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > kBetaLimit) throw Error(ErrorCode::NumericFailure, "beta bracket diverged");
  }
  while (excess(lo) < 0.0) {
    hi = lo;
    lo *= 2.0;
    if (lo < -kBetaLimit) throw Error(ErrorCode::NumericFailure, "beta bracket diverged");
  }

  double best = 0.5 * (lo + hi);
  for (int iter = 0; iter < kBisectionIterations; ++iter) {
    const double mid = 0.5 * (lo + hi);
    best = mid;
    if (mid <= lo || mid >= hi) break;
    const double f = excess(mid);
    if (f == 0.0) break;
    if (f > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  auto solution = generalized_distribution(spectrum, prior, best);
  if (std::abs(solution.mean_energy - target) > tolerance) {
    throw Error(ErrorCode::NumericFailure, "bisection did not reach the energy tolerance");
  }
  return solution;
}

double equilibrium_entropy_uniform(const EnergySpectrum& spectrum, double beta,
                                   std::uint64_t particles, double k) {
  const auto plain = boltzmann_distribution(spectrum, beta);
  const double n = static_cast<double>(spectrum.size());
  return k * static_cast<double>(particles) *
         (std::log(n) + beta * plain.mean_energy + plain.log_partition);
}

double equilibrium_entropy_prior(const EnergySpectrum& spectrum,
                                 const ProbabilityVector& prior, double beta,
                                 std::uint64_t particles, double k) {
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (prior[i] == 0.0) {
      throw Error(ErrorCode::ZeroPriorEntry,
                  "prior entry " + std::to_string(i) + " is zero");
    }
  }
  const auto weighted = generalized_distribution(spectrum, prior, beta);
  const double prior_entropy = shannon_entropy(prior).value;
  return k * static_cast<double>(particles) *
         (prior_entropy + beta * weighted.mean_energy + weighted.log_partition);
}

double gibbs_entropy(const ProbabilityVector& distribution, std::uint64_t particles,
                     double k) {
  return static_cast<double>(particles) * shannon_entropy(distribution, k).value;
}

EntropyInequality entropy_inequality_check(const EnergySpectrum& spectrum,
                                           const ProbabilityVector& prior, double beta,
                                           std::uint64_t particles, double k) {
  const double standalone = equilibrium_entropy_prior(spectrum, prior, beta, particles, k);
  const auto plain = boltzmann_distribution(spectrum, beta);
  const double scale = k * static_cast<double>(particles);
  const double shared = beta * plain.mean_energy + plain.log_partition;
  const double s_uniform =
      scale * (std::log(static_cast<double>(spectrum.size())) + shared);
  const double s_prior = scale * (shannon_entropy(prior).value + shared);
  const bool holds = s_uniform >= s_prior - 1e-12 * std::max(1.0, std::abs(s_uniform));
  return {s_uniform, s_prior, standalone, holds};
}

}  // namespace boltzmann
