#ifndef BOLTZMANN_CORE_HPP
#define BOLTZMANN_CORE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace boltzmann {

enum class ErrorCode {
  LengthMismatch,
  NegativePrior,
  NotNormalized,
  NonPositiveN,
  NonFiniteEnergy,
  NonPositiveK,
  ZeroLevels,
  SizeGuard,
  SupportViolation,
  MeanSumMismatch,
  KMismatch,
  ExceedsReference,
  DegeneratePrior,
  TargetOutOfRange,
  NoVariation,
  ZeroPriorEntry,
  NonPositiveBeta,
  TruncationInsufficient,
  InvalidArgument,
  ParseError,
  NumericFailure,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library is reported through this type; `code()` is
/// the machine-readable part, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Tolerance on |sum - 1| accepted by the ProbabilityVector constructor.
inline constexpr double kSimplexTolerance = 1e-12;

/// Looser tolerance under which user-supplied priors are renormalized.
inline constexpr double kRenormalizeTolerance = 1e-9;

class EnergySpectrum {
 public:
  explicit EnergySpectrum(std::vector<double> levels);

  std::size_t size() const noexcept { return levels_.size(); }
  double operator[](std::size_t i) const { return levels_[i]; }
  std::span<const double> levels() const noexcept { return levels_; }

  bool operator==(const EnergySpectrum&) const = default;

 private:
  std::vector<double> levels_;
};

class ProbabilityVector {
 public:
  /// Rejects negative, non-finite or non-normalized input (|sum - 1| > 1e-12).
  explicit ProbabilityVector(std::vector<double> entries);

  /// Divides by the sum when it is within `tolerance` of 1, rejects otherwise.
  static ProbabilityVector normalized(std::vector<double> entries,
                                      double tolerance = kRenormalizeTolerance);

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> entries() const noexcept { return entries_; }

  bool operator==(const ProbabilityVector&) const = default;

 private:
  std::vector<double> entries_;
};

class CompositionIterator;

/// Occupation numbers [N_1..N_n]; the total is derived, never stored apart.
class Macrostate {
 public:
  explicit Macrostate(std::vector<std::uint64_t> occupations);

  /// Same as above, but also checks that the occupations add up to `total`.
  Macrostate(std::vector<std::uint64_t> occupations, std::uint64_t total);

  std::size_t size() const noexcept { return occupations_.size(); }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t operator[](std::size_t i) const { return occupations_[i]; }
  std::span<const std::uint64_t> occupations() const noexcept {
    return occupations_;
  }

  bool operator==(const Macrostate&) const = default;

 private:
  friend class CompositionIterator;
  Macrostate() = default;

  std::vector<std::uint64_t> occupations_;
  std::uint64_t total_ = 0;
};

std::string to_string(const Macrostate& m);

struct SystemSpec {
  EnergySpectrum spectrum;
  ProbabilityVector prior;
  std::uint64_t particles;
  double boltzmann_k = 1.0;

  std::size_t levels() const noexcept { return spectrum.size(); }

  bool operator==(const SystemSpec&) const = default;
};

/// Unvalidated system description, as read from a spec file.
struct RawSystemSpec {
  std::vector<double> levels;
  std::vector<double> priors;
  std::int64_t particles = 0;
  std::optional<double> boltzmann_k;
};

SystemSpec validate_spec(const RawSystemSpec& raw);

RawSystemSpec to_raw(const SystemSpec& spec);

ProbabilityVector uniform_prior(std::size_t n);

/// Parses the spec-file JSON object {"levels", "priors", "N", "k"?}.
/// Unknown fields and wrong types raise ErrorCode::ParseError.
RawSystemSpec parse_spec_json(std::string_view text);

std::string spec_to_json(const SystemSpec& spec);

}  // namespace boltzmann

#endif  // BOLTZMANN_CORE_HPP
