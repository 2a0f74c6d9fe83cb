#ifndef BOLTZMANN_ORACLE_HPP
#define BOLTZMANN_ORACLE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "boltzmann/combinatorics.hpp"
#include "boltzmann/core.hpp"

namespace boltzmann::oracle {

/// How `passed` is derived from the error fields.
enum class ToleranceMode {
  absolute,     ///< abs_error <= tolerance
  relative,     ///< rel_error <= tolerance
  strict_below  ///< abs_error < tolerance (tolerance = previous step's error)
};

std::string_view to_string(ToleranceMode mode);

/// One exact-versus-approximate comparison. `exact_value` is produced by
/// arbitrary-precision arithmetic; `approx_value` is the only floating
/// quantity in the comparison.
struct OracleReport {
  std::string check_name;
  std::string instance;
  std::string exact_value;
  double approx_value = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  bool passed = false;
  double tolerance = 0.0;
  ToleranceMode mode = ToleranceMode::absolute;
};

/// Recomputes `passed` from the error fields and mode.
void settle(OracleReport& report);

/// Single-line JSON object with snake_case keys; non-finite numbers are null.
std::string to_json(const OracleReport& report);

/// Human-readable one-liner: "PASS check instance ...".
std::string to_text(const OracleReport& report);

/// Rounds N p to an integer macrostate summing to N by largest-remainder
/// apportionment; equal remainders go to the lowest index first.
Macrostate apportion(const ProbabilityVector& p, std::uint64_t particles);

/// Exact rational version of a prior that sums to exactly 1. Entries are
/// recovered as short rationals where possible; otherwise the exact binary
/// values are renormalized by their rational sum.
std::vector<Rational> exact_prior(const ProbabilityVector& prior);

/// Sum P = 1 and sum N_i P = N p0_i over R_{N,n}, in exact rationals.
std::vector<OracleReport> check_normalization_and_means(
    std::uint64_t particles, const std::vector<Rational>& prior,
    std::uint64_t cap = kDefaultSizeGuard);

std::vector<OracleReport> check_normalization_and_means(
    const SystemSpec& spec, std::uint64_t cap = kDefaultSizeGuard);

/// Sum of W over R_{N,n} equals n^N, both as big integers.
OracleReport check_weight_sum(std::uint64_t particles, std::size_t levels,
                              std::uint64_t cap = kDefaultSizeGuard);

struct MostProbableState {
  Macrostate argmax;
  bool tie;  ///< another composition reached the same exact probability
  OracleReport report;
};

/// Exhaustive argmax of the multinomial probability, with the generalized
/// distribution at `beta` as the per-particle probabilities. Passes when
/// max_i |argmax_i / N - p_i| <= n / N. Ties go to the first composition in
/// enumeration order.
MostProbableState check_most_probable_state(const SystemSpec& spec, double beta,
                                            std::uint64_t cap = kDefaultSizeGuard);

/// Per N: d(N) = |ln P_exact(m) - (S(m) - S_equil)/k| / N for m = apportion(p, N),
/// with S and S_equil in Stirling form against the mean N p0. Each report
/// passes when d(N) is strictly below the previous one.
std::vector<OracleReport> check_einstein_convergence(
    const ProbabilityVector& p, const ProbabilityVector& prior,
    std::span<const std::uint64_t> schedule);

/// Per N: r(N) = ln W_max / ln W_total with W_total = n^N. Each report
/// passes when 1 - r(N) is strictly below the previous one; n = 1 is a
/// degenerate pass.
std::vector<OracleReport> check_weight_dominance(std::size_t levels,
                                                 std::span<const std::uint64_t> schedule);

/// ln W_max / (N ln n); exact big-integer weight up to N = 20000, log-gamma above.
double weight_dominance_ratio(std::size_t levels, std::uint64_t particles);

enum class Scale { quick, full };

/// Built-in canonical instances. quick keeps N <= 12; full goes to N = 20
/// and adds the convergence schedules.
std::vector<OracleReport> run_default_suite(Scale scale);

}  // namespace boltzmann::oracle

#endif  // BOLTZMANN_ORACLE_HPP
