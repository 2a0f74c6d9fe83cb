#ifndef BOLTZMANN_OSCILLATORS_HPP
#define BOLTZMANN_OSCILLATORS_HPP

#include <cstddef>
#include <optional>
#include <utility>

#include "boltzmann/core.hpp"

namespace boltzmann {

enum class Dimensionality { Linear1D, Planar2D };

/// Harmonic oscillator ladder. Levels are indexed from i = 1:
///   Linear1D: E_i = (i - 1/2) h_nu, equal priors;
///   Planar2D: E_i = i h_nu, prior proportional to i.
/// `truncation` is the number of levels kept for series evaluation.
class OscillatorModel {
 public:
  OscillatorModel(double h_nu, Dimensionality dimensionality, std::size_t truncation);

  double h_nu() const noexcept { return h_nu_; }
  Dimensionality dimensionality() const noexcept { return dimensionality_; }
  std::size_t truncation() const noexcept { return truncation_; }

  /// Energy of level i (1-based).
  double level_energy(std::size_t i) const;

  /// Unnormalized prior weight of level i (1-based).
  double level_weight(std::size_t i) const;

  OscillatorModel with_truncation(std::size_t truncation) const {
    return {h_nu_, dimensionality_, truncation};
  }

 private:
  double h_nu_;
  Dimensionality dimensionality_;
  std::size_t truncation_;
};

/// 1 / (e^x - 1), switching to 1/x - 1/2 + x/12 for x < 1e-8.
double bose_factor(double x);

/// Closed-form mean energy per oscillator:
///   Linear1D: h_nu/2 + h_nu / (e^{beta h_nu} - 1)
///   Planar2D: h_nu + 2 h_nu / (e^{beta h_nu} - 1)
double mean_energy_closed(const OscillatorModel& model, double beta);

struct SeriesEnergy {
  double value;
  double tail_bound;  ///< upper bound on |value - infinite-ladder mean|
  std::size_t levels;
};

/// Mean energy from the first L levels of the ladder. When `tolerance` is
/// given and the tail bound exceeds it, throws TruncationInsufficient.
SeriesEnergy mean_energy_series(const OscillatorModel& model, double beta,
                                std::optional<double> tolerance = std::nullopt);

/// Doubles the truncation (starting from the model's) until the tail bound
/// is at most `tolerance`; throws TruncationInsufficient past `max_levels`.
SeriesEnergy mean_energy_series_auto(const OscillatorModel& model, double beta,
                                     double tolerance,
                                     std::size_t max_levels = std::size_t{1} << 24);

/// The L-level truncated ladder as a spectrum and prior for the equilibrium
/// functions. Planar2D priors are i / C with C = L(L+1)/2.
std::pair<EnergySpectrum, ProbabilityVector> oscillator_as_system(
    const OscillatorModel& model);

}  // namespace boltzmann

#endif  // BOLTZMANN_OSCILLATORS_HPP
