#ifndef BOLTZMANN_ENTROPY_HPP
#define BOLTZMANN_ENTROPY_HPP

#include <span>

#include "boltzmann/core.hpp"

namespace boltzmann {

/// An entropy together with the Boltzmann constant it was computed with.
/// Values are in the same units as k; 0 ln 0 is taken as 0 throughout.
struct EntropyValue {
  double value;
  double k;
};

/// x ln x with the continuous extension 0 ln 0 = 0.
double x_log_x(double x);

/// -k sum p_i ln p_i.
EntropyValue shannon_entropy(const ProbabilityVector& p, double k = 1.0);

/// -k sum N_i ln N_i on raw occupation numbers.
EntropyValue boltzmann_shannon_entropy(const Macrostate& m, double k = 1.0);

/// Stirling form -k N sum f_i ln f_i of the empirical frequencies f_i = N_i/N.
EntropyValue stirling_entropy(const Macrostate& m, double k = 1.0);

/// k ln W(m) from the exact statistical weight.
EntropyValue exact_boltzmann_entropy(const Macrostate& m, double k = 1.0);

/// Unsigned divergence D(p || p0) = sum p_i ln(p_i / p0_i) >= 0.
/// Throws SupportViolation when p_i > 0 and p0_i = 0.
double kl_divergence(const ProbabilityVector& p, const ProbabilityVector& p0);

/// The signed, particle-scaled cross-entropy -N k D(p || p0) <= 0.
double kl_cross_entropy(const ProbabilityVector& p, const ProbabilityVector& p0,
                        double k, std::uint64_t particles);

/// Generalized Boltzmann entropy k sum N_i ln(N_i / mean_i) of a macrostate
/// against (possibly non-integer) mean occupations that add up to N.
double occupation_cross_entropy(const Macrostate& m, std::span<const double> mean,
                                double k = 1.0);

struct NegentropyRelation {
  double lhs;  ///< k sum N_i ln(N_i / mean_i)
  double rhs;  ///< S_equil - S, both in Stirling form
};

/// Evaluates both sides of the information/negentropy relation. The two
/// agree exactly when sum (N_i - mean_i) ln mean_i vanishes, which is the
/// case for uniform means and for equilibrium means N e^{-beta E_i} / Z
/// compared with a macrostate of the same total energy.
NegentropyRelation negentropy_relation(const Macrostate& m, std::span<const double> mean,
                                       double k = 1.0);

/// exp((S - S_ref) / k). `reference` is the maximum or equilibrium entropy.
double einstein_probability(const EntropyValue& entropy, const EntropyValue& reference);

}  // namespace boltzmann

#endif  // BOLTZMANN_ENTROPY_HPP
