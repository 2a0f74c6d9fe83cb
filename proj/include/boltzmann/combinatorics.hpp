#ifndef BOLTZMANN_COMBINATORICS_HPP
#define BOLTZMANN_COMBINATORICS_HPP

#include <cstdint>
#include <iterator>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "boltzmann/core.hpp"

namespace boltzmann {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Default cap on eager composition enumeration.
inline constexpr std::uint64_t kDefaultSizeGuard = 10'000'000;

/// ln(n!) via log-gamma (reentrant).
double log_factorial(std::uint64_t n);

BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Number of compositions of N into n nonnegative parts: C(N+n-1, n-1).
BigInt composition_count(std::uint64_t total, std::size_t parts);

/// Statistical weight W = N! / prod N_i!, kept both exactly and as ln W.
struct StatWeight {
  BigInt exact;
  double log_value;
};

StatWeight statistical_weight(const Macrostate& m);

/// Forward iterator over the compositions of N into n parts, in
/// descending lexicographic order: [N,0,..,0] first, [0,..,0,N] last.
class CompositionIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = Macrostate;
  using difference_type = std::ptrdiff_t;
  using pointer = const Macrostate*;
  using reference = const Macrostate&;

  CompositionIterator() = default;  // end sentinel
  CompositionIterator(std::uint64_t total, std::size_t parts);

  reference operator*() const { return current_; }
  pointer operator->() const { return &current_; }

  CompositionIterator& operator++();
  CompositionIterator operator++(int) {
    auto copy = *this;
    ++*this;
    return copy;
  }

  friend bool operator==(const CompositionIterator& a, const CompositionIterator& b) {
    if (a.done_ || b.done_) return a.done_ == b.done_;
    return a.current_ == b.current_;
  }

 private:
  Macrostate current_;
  bool done_ = true;
};

/// The set R_{N,n} of occupation vectors with n entries summing to N.
/// Enumeration is lazy; `materialize` is the only eager path and is capped.
class CompositionSet {
 public:
  CompositionSet(std::uint64_t total, std::size_t parts);

  std::uint64_t total() const noexcept { return total_; }
  std::size_t parts() const noexcept { return parts_; }
  BigInt cardinality() const { return composition_count(total_, parts_); }

  CompositionIterator begin() const { return {total_, parts_}; }
  CompositionIterator end() const { return {}; }

  /// Throws ErrorCode::SizeGuard when the cardinality exceeds `cap`.
  std::vector<Macrostate> materialize(std::uint64_t cap = kDefaultSizeGuard) const;

  /// Throws ErrorCode::SizeGuard when the cardinality exceeds `cap`.
  void require_within(std::uint64_t cap) const;

 private:
  std::uint64_t total_;
  std::size_t parts_;
};

CompositionSet enumerate_compositions(std::uint64_t total, std::size_t parts);

/// Multinomial probability W(m) * prod p_i^{N_i}, evaluated in log space.
/// Occupied levels with zero prior yield exactly 0.
double macrostate_probability(const Macrostate& m, const ProbabilityVector& prior);

/// ln of the above; -infinity when an occupied level has zero prior.
double log_macrostate_probability(const Macrostate& m, const ProbabilityVector& prior);

/// Exact rational multinomial probability. `prior` must be nonnegative and
/// sum to exactly 1.
Rational macrostate_probability_exact(const Macrostate& m,
                                      const std::vector<Rational>& prior);

/// W(m) / sum of W over R_{N,n}, by exact enumeration of the composition set.
Rational weight_ratio_probability_exact(const Macrostate& m,
                                        std::uint64_t cap = kDefaultSizeGuard);

double weight_ratio_probability(const Macrostate& m,
                                std::uint64_t cap = kDefaultSizeGuard);

/// Sum of W over R_{N,n} by enumeration. Equals n^N.
BigInt total_weight_by_enumeration(std::uint64_t total, std::size_t parts,
                                   std::uint64_t cap = kDefaultSizeGuard);

/// The most even composition (first N mod n entries get one extra), which
/// carries the largest statistical weight.
Macrostate most_even_composition(std::uint64_t total, std::size_t parts);

/// Exact conversion of a double into a rational. When a rational with
/// denominator at most `max_denominator` reproduces the double exactly, the
/// simplest such rational is returned (0.2 -> 1/5); otherwise the exact
/// binary value.
Rational to_rational(double x, std::uint64_t max_denominator = 1'000'000'000);

double to_double(const Rational& r);

}  // namespace boltzmann

#endif  // BOLTZMANN_COMBINATORICS_HPP
