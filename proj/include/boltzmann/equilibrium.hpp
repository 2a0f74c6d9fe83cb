#ifndef BOLTZMANN_EQUILIBRIUM_HPP
#define BOLTZMANN_EQUILIBRIUM_HPP

#include <cstdint>

#include "boltzmann/core.hpp"

namespace boltzmann {

/// Canonical equilibrium at a given inverse temperature.
struct EquilibriumSolution {
  double beta;
  double log_partition;  ///< ln Z (plain) or ln Z_w (prior-weighted)
  ProbabilityVector distribution;
  double mean_energy;           ///< per particle
  double entropy_per_particle;  ///< Gibbs entropy -sum p ln p, units of k
};

/// p_i = e^{-beta E_i} / Z with Z = sum e^{-beta E_i}.
EquilibriumSolution boltzmann_distribution(const EnergySpectrum& spectrum, double beta);

/// p_i = p0_i e^{-beta E_i} / Z_w with Z_w = sum_j p0_j e^{-beta E_j}.
/// Levels with zero prior get zero probability.
EquilibriumSolution generalized_distribution(const EnergySpectrum& spectrum,
                                             const ProbabilityVector& prior, double beta);

/// Finds beta such that the generalized distribution has the requested mean
/// energy. Bisection on the decreasing map beta -> <E>(beta); beta may be
/// negative. Throws TargetOutOfRange or NoVariation.
EquilibriumSolution solve_beta(const EnergySpectrum& spectrum,
                               const ProbabilityVector& prior, double target_mean_energy);

/// kN [ln n + beta <E> + ln Z], with <E> and Z from the plain Boltzmann
/// distribution. The ln n term is part of the formula as published; the
/// Gibbs entropy of the same distribution is kN (beta <E> + ln Z).
double equilibrium_entropy_uniform(const EnergySpectrum& spectrum, double beta,
                                   std::uint64_t particles, double k = 1.0);

/// -Nk sum p0_i ln p0_i + Nk (beta <E> + ln Z_w), with <E> and Z_w from the
/// generalized distribution at (prior, beta). Every prior entry must be
/// positive (ZeroPriorEntry otherwise).
double equilibrium_entropy_prior(const EnergySpectrum& spectrum,
                                 const ProbabilityVector& prior, double beta,
                                 std::uint64_t particles, double k = 1.0);

/// -kN sum p_i ln p_i of an arbitrary distribution.
double gibbs_entropy(const ProbabilityVector& distribution, std::uint64_t particles,
                     double k = 1.0);

struct EntropyInequality {
  double s_uniform;         ///< equal-prior equilibrium entropy
  double s_prior;           ///< unequal-prior entropy with the shared (beta<E> + ln Z) term
  double s_prior_standalone;  ///< equilibrium_entropy_prior at the same arguments
  bool holds;               ///< s_uniform >= s_prior - 1e-12
};

/// Compares the equal-prior and unequal-prior equilibrium entropies at one
/// beta. Both are evaluated with the same (beta <E> + ln Z) term taken from
/// the plain Boltzmann distribution, so the comparison reduces to
/// ln n >= -sum p0 ln p0.
EntropyInequality entropy_inequality_check(const EnergySpectrum& spectrum,
                                           const ProbabilityVector& prior, double beta,
                                           std::uint64_t particles, double k = 1.0);

}  // namespace boltzmann

#endif  // BOLTZMANN_EQUILIBRIUM_HPP
