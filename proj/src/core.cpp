#include "boltzmann/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace boltzmann {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NegativePrior: return "NegativePrior";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NonPositiveN: return "NonPositiveN";
    case ErrorCode::NonFiniteEnergy: return "NonFiniteEnergy";
    case ErrorCode::NonPositiveK: return "NonPositiveK";
    case ErrorCode::ZeroLevels: return "ZeroLevels";
    case ErrorCode::SizeGuard: return "SizeGuard";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::MeanSumMismatch: return "MeanSumMismatch";
    case ErrorCode::KMismatch: return "KMismatch";
    case ErrorCode::ExceedsReference: return "ExceedsReference";
    case ErrorCode::DegeneratePrior: return "DegeneratePrior";
    case ErrorCode::TargetOutOfRange: return "TargetOutOfRange";
    case ErrorCode::NoVariation: return "NoVariation";
    case ErrorCode::ZeroPriorEntry: return "ZeroPriorEntry";
    case ErrorCode::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NumericFailure: return "NumericFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code) {}

EnergySpectrum::EnergySpectrum(std::vector<double> levels)
    : levels_(std::move(levels)) {
  if (levels_.empty()) {
    throw Error(ErrorCode::ZeroLevels, "energy spectrum needs at least one level");
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!std::isfinite(levels_[i])) {
      throw Error(ErrorCode::NonFiniteEnergy,
                  "level " + std::to_string(i) + " is not finite");
    }
  }
}

namespace {

void check_entries(const std::vector<double>& entries) {
  if (entries.empty()) {
    throw Error(ErrorCode::ZeroLevels, "probability vector is empty");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (std::isnan(entries[i]) || entries[i] < 0.0 || !std::isfinite(entries[i])) {
      throw Error(ErrorCode::NegativePrior,
                  "entry " + std::to_string(i) + " is negative or not finite");
    }
  }
}

double sum_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

ProbabilityVector::ProbabilityVector(std::vector<double> entries)
    : entries_(std::move(entries)) {
  check_entries(entries_);
  const double total = sum_of(entries_);
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "entries sum to " << total;
    throw Error(ErrorCode::NotNormalized, os.str());
  }
}

ProbabilityVector ProbabilityVector::normalized(std::vector<double> entries,
                                                double tolerance) {
  check_entries(entries);
  const double total = sum_of(entries);
  if (std::abs(total - 1.0) > tolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "entries sum to " << total;
    throw Error(ErrorCode::NotNormalized, os.str());
  }
  // Already-valid input is left untouched so validation stays idempotent.
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    for (double& p : entries) p /= total;
  }
  return ProbabilityVector(std::move(entries));
}

Macrostate::Macrostate(std::vector<std::uint64_t> occupations)
    : occupations_(std::move(occupations)) {
  if (occupations_.empty()) {
    throw Error(ErrorCode::ZeroLevels, "macrostate needs at least one level");
  }
  total_ = std::accumulate(occupations_.begin(), occupations_.end(),
                           std::uint64_t{0});
}

Macrostate::Macrostate(std::vector<std::uint64_t> occupations, std::uint64_t total)
    : Macrostate(std::move(occupations)) {
  if (total_ != total) {
    throw Error(ErrorCode::InvalidArgument,
                "occupations sum to " + std::to_string(total_) + ", declared " +
                    std::to_string(total));
  }
}

std::string to_string(const Macrostate& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(m[i]);
  }
  return out + "]";
}

SystemSpec validate_spec(const RawSystemSpec& raw) {
  if (raw.levels.empty()) {
    throw Error(ErrorCode::ZeroLevels, "no energy levels given");
  }
  if (raw.priors.size() != raw.levels.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(raw.priors.size()) + " priors for " +
                    std::to_string(raw.levels.size()) + " levels");
  }
  if (raw.particles < 1) {
    throw Error(ErrorCode::NonPositiveN,
                "particle count " + std::to_string(raw.particles));
  }
  const double k = raw.boltzmann_k.value_or(1.0);
  if (!std::isfinite(k) || k <= 0.0) {
    throw Error(ErrorCode::NonPositiveK, "Boltzmann constant must be positive");
  }
  EnergySpectrum spectrum(raw.levels);
  return SystemSpec{std::move(spectrum), ProbabilityVector::normalized(raw.priors),
                    static_cast<std::uint64_t>(raw.particles), k};
}

RawSystemSpec to_raw(const SystemSpec& spec) {
  const auto levels = spec.spectrum.levels();
  const auto priors = spec.prior.entries();
  return RawSystemSpec{{levels.begin(), levels.end()},
                       {priors.begin(), priors.end()},
                       static_cast<std::int64_t>(spec.particles),
                       spec.boltzmann_k};
}

ProbabilityVector uniform_prior(std::size_t n) {
  if (n == 0) {
    throw Error(ErrorCode::ZeroLevels, "uniform prior over zero levels");
  }
  return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

namespace {

std::vector<double> number_array(const nlohmann::json& j, const char* name) {
  if (!j.is_array()) {
    throw Error(ErrorCode::ParseError, std::string("'") + name + "' must be an array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw Error(ErrorCode::ParseError,
                  std::string("'") + name + "' must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

RawSystemSpec parse_spec_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::ParseError, "spec must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "levels" && key != "priors" && key != "N" && key != "k") {
      throw Error(ErrorCode::ParseError, "unknown field '" + key + "'");
    }
  }
  for (const char* required : {"levels", "priors", "N"}) {
    if (!doc.contains(required)) {
      throw Error(ErrorCode::ParseError, std::string("missing field '") + required + "'");
    }
  }

  RawSystemSpec raw;
  raw.levels = number_array(doc["levels"], "levels");
  raw.priors = number_array(doc["priors"], "priors");
  const auto& n = doc["N"];
  if (!n.is_number_integer()) {
    throw Error(ErrorCode::ParseError, "'N' must be an integer");
  }
  raw.particles = n.get<std::int64_t>();
  if (doc.contains("k")) {
    if (!doc["k"].is_number()) {
      throw Error(ErrorCode::ParseError, "'k' must be a number");
    }
    raw.boltzmann_k = doc["k"].get<double>();
  }
  return raw;
}

std::string spec_to_json(const SystemSpec& spec) {
  const auto levels = spec.spectrum.levels();
  const auto priors = spec.prior.entries();
  nlohmann::json doc = {
      {"levels", std::vector<double>(levels.begin(), levels.end())},
      {"priors", std::vector<double>(priors.begin(), priors.end())},
      {"N", spec.particles},
      {"k", spec.boltzmann_k},
  };
  return doc.dump();
}

}  // namespace boltzmann
