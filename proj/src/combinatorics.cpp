#include "boltzmann/combinatorics.hpp"

#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace boltzmann {

double log_factorial(std::uint64_t n) {
  int sign = 0;
  return ::lgamma_r(static_cast<double>(n) + 1.0, &sign);
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    result *= n - i;
    result /= i + 1;
  }
  return result;
}

BigInt composition_count(std::uint64_t total, std::size_t parts) {
  if (parts == 0) return total == 0 ? 1 : 0;
  return binomial(total + parts - 1, parts - 1);
}

StatWeight statistical_weight(const Macrostate& m) {
  BigInt exact = 1;
  std::uint64_t partial = 0;
  double log_value = log_factorial(m.total());
  for (const std::uint64_t count : m.occupations()) {
    partial += count;
    exact *= binomial(partial, count);
    log_value -= log_factorial(count);
  }
  return {std::move(exact), log_value};
}

CompositionIterator::CompositionIterator(std::uint64_t total, std::size_t parts)
    : done_(false) {
  if (parts == 0) {
    throw Error(ErrorCode::ZeroLevels, "compositions need at least one part");
  }
  current_.occupations_.assign(parts, 0);
  current_.occupations_[0] = total;
  current_.total_ = total;
}

CompositionIterator& CompositionIterator::operator++() {
  auto& c = current_.occupations_;
  const std::size_t n = c.size();
  // Rightmost nonzero entry that is not the last one.
  std::size_t j = n >= 2 ? n - 1 : 0;
  while (j > 0 && c[j - 1] == 0) --j;
  if (j == 0) {
    done_ = true;
    return *this;
  }
  const std::size_t pivot = j - 1;
  std::uint64_t tail = 0;
  for (std::size_t i = pivot + 1; i < n; ++i) {
    tail += c[i];
    c[i] = 0;
  }
  --c[pivot];
  c[pivot + 1] = tail + 1;
  return *this;
}

CompositionSet::CompositionSet(std::uint64_t total, std::size_t parts)
    : total_(total), parts_(parts) {
  if (parts == 0) {
    throw Error(ErrorCode::ZeroLevels, "compositions need at least one part");
  }
}

void CompositionSet::require_within(std::uint64_t cap) const {
  const BigInt count = cardinality();
  if (count > cap) {
    throw Error(ErrorCode::SizeGuard, "composition set R_{" + std::to_string(total_) +
                                          "," + std::to_string(parts_) + "} has " +
                                          count.str() + " elements, cap is " +
                                          std::to_string(cap));
  }
}

std::vector<Macrostate> CompositionSet::materialize(std::uint64_t cap) const {
  require_within(cap);
  std::vector<Macrostate> out;
  out.reserve(static_cast<std::size_t>(cardinality()));
  for (const auto& m : *this) out.push_back(m);
  return out;
}

CompositionSet enumerate_compositions(std::uint64_t total, std::size_t parts) {
  return {total, parts};
}

double log_macrostate_probability(const Macrostate& m, const ProbabilityVector& prior) {
  if (m.size() != prior.size()) {
    throw Error(ErrorCode::LengthMismatch, "macrostate and prior differ in length");
  }
  double log_p = statistical_weight(m).log_value;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (prior[i] == 0.0) return -std::numeric_limits<double>::infinity();
    log_p += static_cast<double>(m[i]) * std::log(prior[i]);
  }
  return log_p;
}

double macrostate_probability(const Macrostate& m, const ProbabilityVector& prior) {
  return std::exp(log_macrostate_probability(m, prior));
}

namespace {

Rational rational_pow(Rational base, std::uint64_t exponent) {
  Rational result = 1;
  while (exponent) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent) base *= base;
  }
  return result;
}

}  // namespace

Rational macrostate_probability_exact(const Macrostate& m,
                                      const std::vector<Rational>& prior) {
  if (m.size() != prior.size()) {
    throw Error(ErrorCode::LengthMismatch, "macrostate and prior differ in length");
  }
  Rational sum = 0;
  for (const auto& p : prior) {
    if (p < 0) throw Error(ErrorCode::NegativePrior, "negative rational prior");
    sum += p;
  }
  if (sum != 1) {
    throw Error(ErrorCode::NotNormalized, "rational prior sums to " + sum.str());
  }
  Rational result(statistical_weight(m).exact);
  for (std::size_t i = 0; i < m.size(); ++i) {
    result *= rational_pow(prior[i], m[i]);
  }
  return result;
}

BigInt total_weight_by_enumeration(std::uint64_t total, std::size_t parts,
                                   std::uint64_t cap) {
  const CompositionSet set(total, parts);
  set.require_within(cap);
  BigInt sum = 0;
  for (const auto& m : set) sum += statistical_weight(m).exact;
  return sum;
}

Rational weight_ratio_probability_exact(const Macrostate& m, std::uint64_t cap) {
  const BigInt denominator = total_weight_by_enumeration(m.total(), m.size(), cap);
  return Rational(statistical_weight(m).exact, denominator);
}

double weight_ratio_probability(const Macrostate& m, std::uint64_t cap) {
  return to_double(weight_ratio_probability_exact(m, cap));
}

Macrostate most_even_composition(std::uint64_t total, std::size_t parts) {
  if (parts == 0) {
    throw Error(ErrorCode::ZeroLevels, "compositions need at least one part");
  }
  const std::uint64_t base = total / parts;
  const std::uint64_t extra = total % parts;
  std::vector<std::uint64_t> occupations(parts, base);
  for (std::uint64_t i = 0; i < extra; ++i) ++occupations[i];
  return Macrostate(std::move(occupations), total);
}

double to_double(const Rational& r) {
  using Float = boost::multiprecision::cpp_bin_float_50;
  const Float value = Float(boost::multiprecision::numerator(r)) /
                      Float(boost::multiprecision::denominator(r));
  return value.convert_to<double>();
}

Rational to_rational(double x, std::uint64_t max_denominator) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::InvalidArgument, "cannot convert non-finite value");
  }
  const Rational exact(x);
  // Walk the continued-fraction convergents of the exact binary value.
  BigInt num = boost::multiprecision::numerator(exact);
  BigInt den = boost::multiprecision::denominator(exact);
  BigInt h = 1, h_prev = 0;
  BigInt k = 0, k_prev = 1;
  while (den != 0) {
    BigInt a = num / den;
    if (num < 0 && a * den != num) a -= 1;  // floor for negatives
    const BigInt h_next = a * h + h_prev;
    const BigInt k_next = a * k + k_prev;
    if (k_next > max_denominator) break;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    const Rational candidate(h, k);
    if (to_double(candidate) == x) return candidate;
    const BigInt rem = num - a * den;
    num = den;
    den = rem;
  }
  return exact;
}

}  // namespace boltzmann
