#include "boltzmann/oscillators.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace boltzmann {

OscillatorModel::OscillatorModel(double h_nu, Dimensionality dimensionality,
                                 std::size_t truncation)
    : h_nu_(h_nu), dimensionality_(dimensionality), truncation_(truncation) {
  if (!std::isfinite(h_nu) || h_nu <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "h_nu must be positive and finite");
  }
  if (truncation == 0) {
    throw Error(ErrorCode::InvalidArgument, "truncation must keep at least one level");
  }
}

double OscillatorModel::level_energy(std::size_t i) const {
  const double index = static_cast<double>(i);
  return dimensionality_ == Dimensionality::Linear1D ? (index - 0.5) * h_nu_
                                                     : index * h_nu_;
}

double OscillatorModel::level_weight(std::size_t i) const {
  return dimensionality_ == Dimensionality::Linear1D ? 1.0 : static_cast<double>(i);
}

double bose_factor(double x) {
  if (x < 1e-8) return 1.0 / x - 0.5 + x / 12.0;
  return 1.0 / std::expm1(x);
}

namespace {

void check_beta(double beta) {
  if (!std::isfinite(beta) || beta <= 0.0) {
    throw Error(ErrorCode::NonPositiveBeta, "beta must be positive");
  }
}

}  // namespace

double mean_energy_closed(const OscillatorModel& model, double beta) {
  check_beta(beta);
  const double h_nu = model.h_nu();
  const double occupation = bose_factor(beta * h_nu);
  if (model.dimensionality() == Dimensionality::Linear1D) {
    return h_nu * (0.5 + occupation);
  }
  return h_nu * (1.0 + 2.0 * occupation);
}

SeriesEnergy mean_energy_series(const OscillatorModel& model, double beta,
                                std::optional<double> tolerance) {
  check_beta(beta);
  const std::size_t levels = model.truncation();
  const double x_log = -beta * model.h_nu();  // ln x, x = e^{-beta h_nu}

  // Terms are scaled by the first level's Boltzmann factor so that the
  // leading term is w_1 = 1 and nothing underflows at large beta. Summed
  // from the small end.
  long double weight_sum = 0.0L;
  long double energy_sum = 0.0L;
  for (std::size_t i = levels; i >= 1; --i) {
    const double term =
        model.level_weight(i) * std::exp(x_log * static_cast<double>(i - 1));
    weight_sum += term;
    energy_sum += static_cast<long double>(term) * model.level_energy(i);
  }
  const double value = static_cast<double>(energy_sum / weight_sum);

  // Both dropped sums are bounded by sum_{i>L} i^2 x^{i-1} (times h_nu for
  // the energy sum); consecutive terms shrink by at most ((L+2)/(L+1))^2 x.
  const double next = static_cast<double>(levels + 1);
  const double ratio = std::pow((next + 1.0) / next, 2) * std::exp(x_log);
  double tail_bound = std::numeric_limits<double>::infinity();
  if (ratio < 1.0) {
    const double first = next * next * std::exp(x_log * static_cast<double>(levels));
    const double tail = first / (1.0 - ratio);
    tail_bound = tail * std::max(model.h_nu(), value) / static_cast<double>(weight_sum);
  }

  if (tolerance && !(tail_bound <= *tolerance)) {
    throw Error(ErrorCode::TruncationInsufficient,
                "tail bound " + std::to_string(tail_bound) + " with L = " +
                    std::to_string(levels) + " exceeds tolerance");
  }
  return {value, tail_bound, levels};
}

SeriesEnergy mean_energy_series_auto(const OscillatorModel& model, double beta,
                                     double tolerance, std::size_t max_levels) {
  OscillatorModel current = model;
  while (true) {
    auto series = mean_energy_series(current, beta);
    if (series.tail_bound <= tolerance) return series;
    const std::size_t grown = current.truncation() * 2;
    if (grown > max_levels) {
      throw Error(ErrorCode::TruncationInsufficient,
                  "no truncation up to " + std::to_string(max_levels) +
                      " levels meets the tolerance");
    }
    current = current.with_truncation(grown);
  }
}

std::pair<EnergySpectrum, ProbabilityVector> oscillator_as_system(
    const OscillatorModel& model) {
  const std::size_t levels = model.truncation();
  std::vector<double> energies(levels);
  std::vector<double> priors(levels);
  double normalizer = 0.0;
  for (std::size_t i = 1; i <= levels; ++i) {
    energies[i - 1] = model.level_energy(i);
    priors[i - 1] = model.level_weight(i);
    normalizer += priors[i - 1];
  }
  for (double& p : priors) p /= normalizer;
  return {EnergySpectrum(std::move(energies)),
          ProbabilityVector::normalized(std::move(priors))};
}

}  // namespace boltzmann
