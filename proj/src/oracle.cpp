#include "boltzmann/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

#include "boltzmann/entropy.hpp"
#include "boltzmann/equilibrium.hpp"
#include "json.hpp"

namespace boltzmann::oracle {

namespace {

using HighFloat = boost::multiprecision::cpp_bin_float_50;

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kExactDominanceLimit = 20000;

HighFloat high(const BigInt& value) { return HighFloat(value); }

HighFloat high(const Rational& value) {
  return high(boost::multiprecision::numerator(value)) /
         high(boost::multiprecision::denominator(value));
}

std::string decimal(const HighFloat& value) { return value.str(30); }

std::string decimal(const Rational& value) {
  if (boost::multiprecision::denominator(value) == 1) {
    return boost::multiprecision::numerator(value).str();
  }
  return decimal(high(value));
}

std::string vector_text(std::span<const double> values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += fmt::format("{:.12g}", values[i]);
  }
  return out + "]";
}

std::string vector_text(const std::vector<Rational>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += values[i].str();
  }
  return out + "]";
}

double relative(double abs_error, double scale) {
  return scale == 0.0 ? abs_error : abs_error / std::abs(scale);
}

// ln of a positive rational, to ~50 digits.
HighFloat log_of(const Rational& value) {
  return boost::multiprecision::log(high(boost::multiprecision::numerator(value))) -
         boost::multiprecision::log(high(boost::multiprecision::denominator(value)));
}

Rational power(Rational base, std::uint64_t exponent) {
  Rational result = 1;
  while (exponent) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent) base *= base;
  }
  return result;
}

}  // namespace

std::string_view to_string(ToleranceMode mode) {
  switch (mode) {
    case ToleranceMode::absolute: return "absolute";
    case ToleranceMode::relative: return "relative";
    case ToleranceMode::strict_below: return "strict_below";
  }
  return "unknown";
}

void settle(OracleReport& report) {
  switch (report.mode) {
    case ToleranceMode::absolute:
      report.passed = report.abs_error <= report.tolerance;
      break;
    case ToleranceMode::relative:
      report.passed = report.rel_error <= report.tolerance;
      break;
    case ToleranceMode::strict_below:
      report.passed = report.abs_error < report.tolerance;
      break;
  }
}

std::string to_json(const OracleReport& report) {
  const nlohmann::json doc = {
      {"check_name", report.check_name},
      {"instance", report.instance},
      {"exact_value", report.exact_value},
      {"approx_value", report.approx_value},
      {"abs_error", report.abs_error},
      {"rel_error", report.rel_error},
      {"passed", report.passed},
      {"tolerance", report.tolerance},
      {"mode", std::string(to_string(report.mode))},
  };
  return doc.dump();
}

std::string to_text(const OracleReport& report) {
  return fmt::format("{} {} {} exact={} approx={:.12g} abs_error={:.12g} tol={:.12g} ({})",
                     report.passed ? "PASS" : "FAIL", report.check_name, report.instance,
                     report.exact_value, report.approx_value, report.abs_error,
                     report.tolerance, to_string(report.mode));
}

Macrostate apportion(const ProbabilityVector& p, std::uint64_t particles) {
  const std::size_t n = p.size();
  const double total = static_cast<double>(particles);
  std::vector<std::uint64_t> counts(n);
  std::vector<double> remainders(n);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double share = total * p[i];
    const double whole = std::floor(share);
    counts[i] = static_cast<std::uint64_t>(whole);
    remainders[i] = share - whole;
    assigned += counts[i];
  }
  if (assigned > particles) {
    throw Error(ErrorCode::NumericFailure, "apportionment overshoots N");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::uint64_t left = particles - assigned, j = 0; left > 0; --left, ++j) {
    ++counts[order[j % n]];
  }
  return Macrostate(std::move(counts), particles);
}

std::vector<Rational> exact_prior(const ProbabilityVector& prior) {
  std::vector<Rational> out;
  out.reserve(prior.size());
  Rational sum = 0;
  for (const double p : prior.entries()) {
    out.push_back(to_rational(p));
    sum += out.back();
  }
  if (sum == 1) return out;
  sum = 0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    out[i] = Rational(prior[i]);
    sum += out[i];
  }
  for (auto& r : out) r /= sum;
  return out;
}

std::vector<OracleReport> check_normalization_and_means(
    std::uint64_t particles, const std::vector<Rational>& prior, std::uint64_t cap) {
  const CompositionSet set(particles, prior.size());
  set.require_within(cap);

  Rational total = 0;
  std::vector<Rational> means(prior.size(), Rational(0));
  for (const auto& m : set) {
    const Rational p = macrostate_probability_exact(m, prior);
    total += p;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i]) means[i] += p * m[i];
    }
  }

  const std::string instance =
      fmt::format("N={} n={} prior={}", particles, prior.size(), vector_text(prior));
  std::vector<OracleReport> reports;

  OracleReport norm;
  norm.check_name = "normalization";
  norm.instance = instance;
  norm.exact_value = decimal(total);
  norm.approx_value = 1.0;
  const Rational gap = total > 1 ? Rational(total - 1) : Rational(1 - total);
  norm.abs_error = to_double(gap);
  norm.rel_error = norm.abs_error;
  norm.tolerance = 0.0;
  settle(norm);
  reports.push_back(std::move(norm));

  for (std::size_t i = 0; i < prior.size(); ++i) {
    const Rational expected = prior[i] * particles;
    const Rational diff = means[i] > expected ? Rational(means[i] - expected)
                                              : Rational(expected - means[i]);
    OracleReport mean;
    mean.check_name = "mean_occupation";
    mean.instance = fmt::format("{} level={}", instance, i + 1);
    mean.exact_value = decimal(means[i]);
    mean.approx_value = to_double(expected);
    mean.abs_error = to_double(diff);
    mean.rel_error = relative(mean.abs_error, mean.approx_value);
    mean.tolerance = 0.0;
    settle(mean);
    reports.push_back(std::move(mean));
  }
  return reports;
}

std::vector<OracleReport> check_normalization_and_means(const SystemSpec& spec,
                                                        std::uint64_t cap) {
  return check_normalization_and_means(spec.particles, exact_prior(spec.prior), cap);
}

OracleReport check_weight_sum(std::uint64_t particles, std::size_t levels,
                              std::uint64_t cap) {
  const BigInt enumerated = total_weight_by_enumeration(particles, levels, cap);
  const BigInt expected = boost::multiprecision::pow(BigInt(levels),
                                                     static_cast<unsigned>(particles));
  OracleReport report;
  report.check_name = "weight_sum";
  report.instance = fmt::format("N={} n={}", particles, levels);
  report.exact_value = enumerated.str();
  report.approx_value = expected.convert_to<double>();
  const BigInt diff = enumerated > expected ? BigInt(enumerated - expected)
                                            : BigInt(expected - enumerated);
  report.abs_error = diff.convert_to<double>();
  report.rel_error = relative(report.abs_error, report.approx_value);
  report.tolerance = 0.0;
  settle(report);
  return report;
}

MostProbableState check_most_probable_state(const SystemSpec& spec, double beta,
                                            std::uint64_t cap) {
  const auto equilibrium = generalized_distribution(spec.spectrum, spec.prior, beta);
  const ProbabilityVector& p = equilibrium.distribution;
  const std::size_t n = p.size();
  const CompositionSet set(spec.particles, n);
  set.require_within(cap);

  // The doubles are exact dyadic rationals; their sum may differ from 1 by
  // an ulp, which rescales every candidate equally and cannot move the argmax.
  std::vector<Rational> weights;
  weights.reserve(n);
  for (const double pi : p.entries()) weights.emplace_back(pi);

  Rational best = -1;
  std::optional<Macrostate> argmax;
  bool tie = false;
  for (const auto& m : set) {
    Rational value(statistical_weight(m).exact);
    for (std::size_t i = 0; i < n; ++i) value *= power(weights[i], m[i]);
    if (value > best) {
      best = value;
      argmax = m;
      tie = false;
    } else if (value == best) {
      tie = true;
    }
  }

  const double total = static_cast<double>(spec.particles);
  double distance = 0.0;
  double largest = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    distance = std::max(distance, std::abs(static_cast<double>((*argmax)[i]) / total - p[i]));
    largest = std::max(largest, p[i]);
  }

  OracleReport report;
  report.check_name = "most_probable_state";
  report.instance = fmt::format("N={} n={} beta={:.12g} p={} argmax={}{}", spec.particles,
                                n, beta, vector_text(p.entries()), to_string(*argmax),
                                tie ? " (tie)" : "");
  report.exact_value = decimal(best);
  report.approx_value = distance;
  report.abs_error = distance;
  report.rel_error = relative(distance, largest);
  report.tolerance = static_cast<double>(n) / total;
  settle(report);
  return {*argmax, tie, std::move(report)};
}

std::vector<OracleReport> check_einstein_convergence(
    const ProbabilityVector& p, const ProbabilityVector& prior,
    std::span<const std::uint64_t> schedule) {
  if (p.size() != prior.size()) {
    throw Error(ErrorCode::LengthMismatch, "distribution and prior differ in length");
  }
  const auto rational_prior = exact_prior(prior);
  std::vector<OracleReport> reports;
  double previous = kInfinity;
  for (const std::uint64_t particles : schedule) {
    const Macrostate m = apportion(p, particles);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] > 0 && prior[i] == 0.0) {
        throw Error(ErrorCode::SupportViolation,
                    "occupied level " + std::to_string(i) + " has zero prior");
      }
    }
    const HighFloat log_p = log_of(macrostate_probability_exact(m, rational_prior));

    std::vector<double> mean(prior.size());
    for (std::size_t i = 0; i < mean.size(); ++i) {
      mean[i] = static_cast<double>(particles) * prior[i];
    }
    const double entropy_gap = -negentropy_relation(m, mean).rhs;  // (S - S_equil)/k

    const double total = static_cast<double>(particles);
    const double log_p_double = log_p.convert_to<double>();
    const double discrepancy = std::abs(log_p_double - entropy_gap) / total;

    OracleReport report;
    report.check_name = "einstein_convergence";
    report.instance = fmt::format("N={} m={} p={} prior={}", particles, to_string(m),
                                  vector_text(p.entries()), vector_text(prior.entries()));
    report.exact_value = decimal(log_p);
    report.approx_value = entropy_gap;
    report.abs_error = discrepancy;
    report.rel_error = relative(discrepancy * total, log_p_double);
    report.tolerance = previous;
    report.mode = ToleranceMode::strict_below;
    settle(report);
    reports.push_back(std::move(report));
    previous = discrepancy;
  }
  return reports;
}

namespace {

HighFloat dominance_ratio_high(std::size_t levels, std::uint64_t particles) {
  const HighFloat log_total = HighFloat(particles) * boost::multiprecision::log(HighFloat(levels));
  const Macrostate densest = most_even_composition(particles, levels);
  if (particles <= kExactDominanceLimit) {
    return boost::multiprecision::log(high(statistical_weight(densest).exact)) / log_total;
  }
  return HighFloat(statistical_weight(densest).log_value) / log_total;
}

}  // namespace

double weight_dominance_ratio(std::size_t levels, std::uint64_t particles) {
  if (levels == 0) throw Error(ErrorCode::ZeroLevels, "no levels");
  if (levels == 1 || particles == 0) return 1.0;
  if (particles > kExactDominanceLimit) {
    const Macrostate densest = most_even_composition(particles, levels);
    return statistical_weight(densest).log_value /
           (static_cast<double>(particles) * std::log(static_cast<double>(levels)));
  }
  return dominance_ratio_high(levels, particles).convert_to<double>();
}

std::vector<OracleReport> check_weight_dominance(std::size_t levels,
                                                 std::span<const std::uint64_t> schedule) {
  if (levels == 0) throw Error(ErrorCode::ZeroLevels, "no levels");
  std::vector<OracleReport> reports;
  double previous = kInfinity;
  for (const std::uint64_t particles : schedule) {
    OracleReport report;
    report.check_name = "weight_dominance";
    report.instance = fmt::format("N={} n={}", particles, levels);
    if (levels == 1 || particles == 0) {
      // W_max = W_total: nothing to converge.
      report.instance += " (degenerate)";
      report.exact_value = "1";
      report.approx_value = 1.0;
      report.tolerance = 0.0;
      report.mode = ToleranceMode::absolute;
    } else {
      const HighFloat ratio = particles <= kExactDominanceLimit
                                  ? dominance_ratio_high(levels, particles)
                                  : HighFloat(weight_dominance_ratio(levels, particles));
      report.exact_value = decimal(ratio);
      report.approx_value = ratio.convert_to<double>();
      report.abs_error = (HighFloat(1) - ratio).convert_to<double>();
      report.rel_error = report.abs_error;
      report.tolerance = previous;
      report.mode = ToleranceMode::strict_below;
      previous = report.abs_error;
    }
    settle(report);
    reports.push_back(std::move(report));
  }
  return reports;
}

namespace {

SystemSpec make_spec(std::vector<double> levels, std::vector<double> priors,
                     std::int64_t particles) {
  return validate_spec(RawSystemSpec{std::move(levels), std::move(priors), particles, 1.0});
}

void append(std::vector<OracleReport>& into, std::vector<OracleReport> more) {
  into.insert(into.end(), std::make_move_iterator(more.begin()),
              std::make_move_iterator(more.end()));
}

}  // namespace

std::vector<OracleReport> run_default_suite(Scale scale) {
  const bool full = scale == Scale::full;
  std::vector<OracleReport> reports;

  std::vector<SystemSpec> specs = {
      make_spec({0, 1}, {0.5, 0.5}, 3),
      make_spec({0, 1, 2}, {0.2, 0.3, 0.5}, 1),
      make_spec({0, 1, 2}, {0.2, 0.3, 0.5}, 10),
      make_spec({0, 1, 2, 3}, {0.1, 0.2, 0.3, 0.4}, 12),
  };
  if (full) {
    specs.push_back(make_spec({0, 1, 2, 3}, {0.1, 0.2, 0.3, 0.4}, 20));
    specs.push_back(make_spec({0, 1, 2}, {0.25, 0.25, 0.5}, 20));
  }
  for (const auto& spec : specs) append(reports, check_normalization_and_means(spec));

  const std::uint64_t n_max = full ? 20 : 12;
  for (const std::size_t levels : {std::size_t{2}, std::size_t{3}, std::size_t{4}}) {
    reports.push_back(check_weight_sum(n_max, levels));
  }

  for (const std::uint64_t particles : {std::uint64_t{4}, std::uint64_t{10}, n_max}) {
    for (const double beta : {0.0, 1.0}) {
      reports.push_back(
          check_most_probable_state(make_spec({0, 1}, {0.5, 0.5}, particles), beta).report);
      reports.push_back(check_most_probable_state(
                            make_spec({0, 1, 2}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, particles), beta)
                            .report);
    }
  }

  const std::vector<std::uint64_t> small_schedule = {2, 4, 8, 12};
  append(reports, check_weight_dominance(2, small_schedule));
  append(reports, check_weight_dominance(1, std::vector<std::uint64_t>{4, 8}));

  if (full) {
    const std::vector<std::uint64_t> schedule = {10, 100, 1000};
    const auto uniform = uniform_prior(2);
    append(reports,
           check_einstein_convergence(ProbabilityVector({0.6, 0.4}), uniform, schedule));
    append(reports,
           check_einstein_convergence(ProbabilityVector({0.9, 0.1}), uniform, schedule));
    const std::vector<std::uint64_t> dominance = {10, 100, 1000, 10000};
    append(reports, check_weight_dominance(2, dominance));
  }
  return reports;
}

}  // namespace boltzmann::oracle
