#include "boltzmann/entropy.hpp"

#include <cmath>

#include "boltzmann/combinatorics.hpp"

namespace boltzmann {

namespace {

void check_k(double k) {
  if (!std::isfinite(k) || k <= 0.0) {
    throw Error(ErrorCode::NonPositiveK, "Boltzmann constant must be positive");
  }
}

void check_mean(const Macrostate& m, std::span<const double> mean) {
  if (mean.size() != m.size()) {
    throw Error(ErrorCode::LengthMismatch, "mean occupations differ in length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    if (!std::isfinite(mean[i]) || mean[i] < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "mean occupations must be finite and >= 0");
    }
    if (m[i] > 0 && mean[i] == 0.0) {
      throw Error(ErrorCode::SupportViolation,
                  "level " + std::to_string(i) + " occupied but has zero mean");
    }
    sum += mean[i];
  }
  const double n = static_cast<double>(m.total());
  if (std::abs(sum - n) > 1e-9 * std::max(1.0, n)) {
    throw Error(ErrorCode::MeanSumMismatch, "mean occupations sum to " +
                                                std::to_string(sum) + ", N = " +
                                                std::to_string(m.total()));
  }
}

}  // namespace

double x_log_x(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

EntropyValue shannon_entropy(const ProbabilityVector& p, double k) {
  check_k(k);
  double sum = 0.0;
  for (const double pi : p.entries()) sum += x_log_x(pi);
  // -0.0 for deterministic vectors reads oddly in output.
  return {sum == 0.0 ? 0.0 : -k * sum, k};
}

EntropyValue boltzmann_shannon_entropy(const Macrostate& m, double k) {
  check_k(k);
  double sum = 0.0;
  for (const auto count : m.occupations()) sum += x_log_x(static_cast<double>(count));
  return {sum == 0.0 ? 0.0 : -k * sum, k};
}

EntropyValue stirling_entropy(const Macrostate& m, double k) {
  check_k(k);
  if (m.total() == 0) {
    throw Error(ErrorCode::NonPositiveN, "Stirling entropy needs N >= 1");
  }
  const double n = static_cast<double>(m.total());
  double sum = 0.0;
  for (const auto count : m.occupations()) {
    sum += x_log_x(static_cast<double>(count) / n);
  }
  return {sum == 0.0 ? 0.0 : -k * n * sum, k};
}

EntropyValue exact_boltzmann_entropy(const Macrostate& m, double k) {
  check_k(k);
  return {k * statistical_weight(m).log_value, k};
}

double kl_divergence(const ProbabilityVector& p, const ProbabilityVector& p0) {
  if (p.size() != p0.size()) {
    throw Error(ErrorCode::LengthMismatch, "distributions differ in length");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (p0[i] == 0.0) {
      throw Error(ErrorCode::SupportViolation,
                  "p_" + std::to_string(i) + " > 0 but reference is 0");
    }
    d += p[i] * std::log(p[i] / p0[i]);
  }
  return d;
}

double kl_cross_entropy(const ProbabilityVector& p, const ProbabilityVector& p0,
                        double k, std::uint64_t particles) {
  check_k(k);
  const double d = kl_divergence(p, p0);
  return d == 0.0 ? 0.0 : -static_cast<double>(particles) * k * d;
}

double occupation_cross_entropy(const Macrostate& m, std::span<const double> mean,
                                double k) {
  check_k(k);
  check_mean(m, mean);
  double sum = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    const double count = static_cast<double>(m[i]);
    sum += count * std::log(count / mean[i]);
  }
  return k * sum;
}

NegentropyRelation negentropy_relation(const Macrostate& m, std::span<const double> mean,
                                       double k) {
  const double lhs = occupation_cross_entropy(m, mean, k);
  const double n = static_cast<double>(m.total());
  double equilibrium = 0.0;
  for (const double mi : mean) equilibrium -= x_log_x(mi / n);
  const double s_equil = k * n * equilibrium;
  const double s = stirling_entropy(m, k).value;
  return {lhs, s_equil - s};
}

double einstein_probability(const EntropyValue& entropy, const EntropyValue& reference) {
  if (entropy.k != reference.k) {
    throw Error(ErrorCode::KMismatch, "entropies use different Boltzmann constants");
  }
  check_k(entropy.k);
  if (entropy.value > reference.value + 1e-12) {
    throw Error(ErrorCode::ExceedsReference, "entropy exceeds the reference entropy");
  }
  return std::exp(std::min(0.0, entropy.value - reference.value) / entropy.k);
}

}  // namespace boltzmann
