// boltzmann: batch front end for the equilibrium, oscillator and oracle
// routines. Data goes to stdout (CSV with a header row, or JSON lines);
// diagnostics go to stderr.
//
// Exit codes: 0 success, 1 verification failure, 2 input/validation error,
// 3 numeric failure, 4 constraint infeasibility.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "boltzmann/core.hpp"
#include "boltzmann/entropy.hpp"
#include "boltzmann/equilibrium.hpp"
#include "boltzmann/oracle.hpp"
#include "boltzmann/oscillators.hpp"
#include "json.hpp"

namespace {

using namespace boltzmann;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitInfeasible = 4;

// Empty cells render as an empty CSV field or JSON null.
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.12g}", v);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

  void write_csv(std::ostream& out) const {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      out << (c ? "," : "") << columns_[c];
    }
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ',';
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) {
                out << number(v);
              } else if constexpr (std::is_same_v<T, long long>) {
                out << v;
              } else if constexpr (std::is_same_v<T, bool>) {
                out << (v ? "true" : "false");
              } else if constexpr (std::is_same_v<T, std::string>) {
                out << csv_escape(v);
              }
            },
            row[c]);
      }
      out << '\n';
    }
  }

  void write_json_lines(std::ostream& out) const {
    for (const auto& row : rows_) {
      // Keys are emitted in column order, so build the line by hand.
      out << '{';
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ',';
        out << nlohmann::json(columns_[c]).dump() << ':';
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, std::monostate>) {
                out << "null";
              } else if constexpr (std::is_same_v<T, double>) {
                out << (std::isfinite(v) ? number(v) : "null");
              } else if constexpr (std::is_same_v<T, long long>) {
                out << v;
              } else if constexpr (std::is_same_v<T, bool>) {
                out << (v ? "true" : "false");
              } else {
                out << nlohmann::json(v).dump();
              }
            },
            row[c]);
      }
      out << "}\n";
    }
  }

  void write(std::ostream& out, const std::string& format) const {
    if (format == "json") {
      write_json_lines(out);
    } else {
      write_csv(out);
    }
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

SystemSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open spec file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return validate_spec(parse_spec_json(buffer.str()));
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::TargetOutOfRange:
    case ErrorCode::NoVariation:
      return kExitInfeasible;
    case ErrorCode::NumericFailure:
    case ErrorCode::DegeneratePrior:
    case ErrorCode::TruncationInsufficient:
      return kExitNumeric;
    default:
      return kExitInput;
  }
}

Cell temperature_cell(double beta, double k) {
  if (beta == 0.0) return std::monostate{};
  return 1.0 / (k * beta);
}

bool is_uniform(const ProbabilityVector& prior) {
  const auto [lo, hi] = std::minmax_element(prior.entries().begin(), prior.entries().end());
  return *hi - *lo <= 1e-15;
}

bool all_positive(const ProbabilityVector& prior) {
  return std::all_of(prior.entries().begin(), prior.entries().end(),
                     [](double p) { return p > 0.0; });
}

// Equal-prior formula when the prior is uniform, prior-weighted otherwise;
// empty when a prior entry is zero.
Cell published_entropy(const SystemSpec& spec, double beta) {
  if (is_uniform(spec.prior)) {
    return equilibrium_entropy_uniform(spec.spectrum, beta, spec.particles, spec.boltzmann_k);
  }
  if (!all_positive(spec.prior)) return std::monostate{};
  return equilibrium_entropy_prior(spec.spectrum, spec.prior, beta, spec.particles,
                                   spec.boltzmann_k);
}

void print_solution(const SystemSpec& spec, const EquilibriumSolution& solution,
                    const std::string& format, std::optional<double> target) {
  Table levels({"level", "energy", "prior", "probability"});
  for (std::size_t i = 0; i < spec.levels(); ++i) {
    levels.add({static_cast<long long>(i + 1), spec.spectrum[i], spec.prior[i],
                solution.distribution[i]});
  }
  std::vector<std::string> columns = {"beta", "temperature", "log_partition", "mean_energy",
                                      "gibbs_entropy"};
  std::vector<Cell> row = {solution.beta, temperature_cell(solution.beta, spec.boltzmann_k),
                           solution.log_partition, solution.mean_energy,
                           gibbs_entropy(solution.distribution, spec.particles,
                                         spec.boltzmann_k)};
  if (target) {
    columns.emplace_back("target_energy");
    row.emplace_back(*target);
  }
  Table summary(std::move(columns));
  summary.add(std::move(row));

  levels.write(std::cout, format);
  if (format != "json") std::cout << '\n';
  summary.write(std::cout, format);
}

struct Grid {
  double from = 0.0;
  double to = 1.0;
  int points = 2;
  std::string spacing = "linear";

  std::vector<double> values() const {
    if (!(from < to)) throw Error(ErrorCode::InvalidArgument, "--from must be below --to");
    if (points < 2) throw Error(ErrorCode::InvalidArgument, "--points must be at least 2");
    const bool log_spacing = spacing == "log";
    if (log_spacing && !(from > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "log spacing needs a positive start");
    }
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
      const double t = static_cast<double>(i) / (points - 1);
      out[static_cast<std::size_t>(i)] =
          log_spacing ? std::exp(std::log(from) + t * (std::log(to) - std::log(from)))
                      : from + t * (to - from);
    }
    out.front() = from;
    out.back() = to;
    return out;
  }
};

int run_sweep(const std::string& spec_path, const Grid& grid, const std::string& variable,
              const std::string& format) {
  const auto spec = load_spec(spec_path);
  const auto values = grid.values();
  if (variable == "temperature" && !(grid.from > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "temperatures must be positive");
  }
  Table table({"beta", "temperature", "log_partition", "mean_energy", "gibbs_entropy",
               "equilibrium_entropy", "kl_to_prior"});
  for (const double value : values) {
    const double beta = variable == "temperature" ? 1.0 / (spec.boltzmann_k * value) : value;
    const auto solution = generalized_distribution(spec.spectrum, spec.prior, beta);
    table.add({beta, temperature_cell(beta, spec.boltzmann_k), solution.log_partition,
               solution.mean_energy,
               gibbs_entropy(solution.distribution, spec.particles, spec.boltzmann_k),
               published_entropy(spec, beta), kl_divergence(solution.distribution, spec.prior)});
  }
  table.write(std::cout, format);
  return 0;
}

int run_verify(const std::string& scale, const std::string& format) {
  const auto reports =
      oracle::run_default_suite(scale == "full" ? oracle::Scale::full : oracle::Scale::quick);
  std::size_t failed = 0;
  for (const auto& r : reports) failed += r.passed ? 0 : 1;

  if (format == "json") {
    for (const auto& r : reports) std::cout << oracle::to_json(r) << '\n';
  } else if (format == "csv") {
    Table table({"check_name", "instance", "exact_value", "approx_value", "abs_error",
                 "rel_error", "passed", "tolerance", "mode"});
    for (const auto& r : reports) {
      table.add({r.check_name, r.instance, r.exact_value, r.approx_value, r.abs_error,
                 r.rel_error, r.passed, r.tolerance, std::string(oracle::to_string(r.mode))});
    }
    table.write_csv(std::cout);
  } else {
    for (const auto& r : reports) std::cout << oracle::to_text(r) << '\n';
    std::cout << fmt::format("summary: {} checks, {} passed, {} failed\n", reports.size(),
                             reports.size() - failed, failed);
  }
  if (format != "text") {
    std::cerr << fmt::format("summary: {} checks, {} passed, {} failed\n", reports.size(),
                             reports.size() - failed, failed);
  }
  return failed == 0 ? 0 : kExitVerifyFailed;
}

int run_oscillator(const std::string& dim, double h_nu, std::size_t levels,
                   std::optional<double> beta, const Grid& grid, const std::string& format) {
  const OscillatorModel model(h_nu, dim == "2d" ? Dimensionality::Planar2D
                                                : Dimensionality::Linear1D,
                              levels);
  const std::vector<double> betas = beta ? std::vector<double>{*beta} : grid.values();
  for (const double b : betas) {
    if (!(b > 0.0)) throw Error(ErrorCode::NonPositiveBeta, "beta range must be positive");
  }
  Table table({"beta", "closed_form_energy", "series_energy", "tail_bound", "difference",
               "within_bound"});
  for (const double b : betas) {
    const double closed = mean_energy_closed(model, b);
    const auto series = mean_energy_series(model, b);
    const double difference = std::abs(series.value - closed);
    const bool within = difference <= series.tail_bound + 1e-12;
    if (!within) {
      std::cerr << fmt::format("warning: beta={} difference {} exceeds tail bound {}\n",
                               number(b), number(difference), number(series.tail_bound));
    }
    table.add({b, closed, series.value, series.tail_bound, difference, within});
  }
  table.write(std::cout, format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Boltzmann distribution and entropy toolkit"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string format = "csv";
  double beta = 0.0;
  double target = 0.0;
  Grid grid;
  std::string variable = "beta";
  std::string scale = "quick";
  std::string verify_format = "text";
  std::string dim = "1d";
  double h_nu = 1.0;
  std::size_t levels = 200;
  std::optional<double> osc_beta;

  const auto formats = CLI::IsMember({"csv", "json"});

  auto* distribution = app.add_subcommand("distribution", "Generalized distribution at one beta");
  distribution->add_option("--spec", spec_path, "System spec JSON file")->required();
  distribution->add_option("--beta", beta, "Inverse temperature")->required();
  distribution->add_option("--format", format)->check(formats);

  auto* sweep = app.add_subcommand("sweep", "Equilibrium quantities over a beta or T grid");
  sweep->add_option("--spec", spec_path, "System spec JSON file")->required();
  sweep->add_option("--from", grid.from)->required();
  sweep->add_option("--to", grid.to)->required();
  sweep->add_option("--points", grid.points)->required();
  sweep->add_option("--spacing", grid.spacing)->check(CLI::IsMember({"linear", "log"}));
  sweep->add_option("--variable", variable)->check(CLI::IsMember({"beta", "temperature"}));
  sweep->add_option("--format", format)->check(formats);

  auto* solve = app.add_subcommand("solve", "Find beta for a target mean energy");
  solve->add_option("--spec", spec_path, "System spec JSON file")->required();
  solve->add_option("--target-energy", target, "Mean energy per particle")->required();
  solve->add_option("--format", format)->check(formats);

  auto* verify = app.add_subcommand("verify", "Run the built-in oracle suite");
  verify->add_option("--scale", scale)->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--format", verify_format)->check(CLI::IsMember({"text", "csv", "json"}));

  auto* oscillator = app.add_subcommand("oscillator", "Oscillator mean energy, closed vs series");
  oscillator->add_option("--dim", dim)->check(CLI::IsMember({"1d", "2d"}));
  oscillator->add_option("--h-nu", h_nu);
  oscillator->add_option("--levels", levels);
  auto* osc_beta_opt = oscillator->add_option("--beta", osc_beta, "Single beta");
  auto* osc_from = oscillator->add_option("--from", grid.from)->excludes(osc_beta_opt);
  oscillator->add_option("--to", grid.to)->needs(osc_from);
  oscillator->add_option("--points", grid.points)->needs(osc_from);
  oscillator->add_option("--spacing", grid.spacing)->check(CLI::IsMember({"linear", "log"}));
  oscillator->add_option("--format", format)->check(formats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*distribution) {
      const auto spec = load_spec(spec_path);
      print_solution(spec, generalized_distribution(spec.spectrum, spec.prior, beta), format,
                     std::nullopt);
      return 0;
    }
    if (*sweep) return run_sweep(spec_path, grid, variable, format);
    if (*solve) {
      const auto spec = load_spec(spec_path);
      print_solution(spec, solve_beta(spec.spectrum, spec.prior, target), format, target);
      return 0;
    }
    if (*verify) return run_verify(scale, verify_format);
    if (*oscillator) {
      if (!osc_beta && osc_from->count() == 0) {
        throw Error(ErrorCode::InvalidArgument, "give --beta or --from/--to/--points");
      }
      return run_oscillator(dim, h_nu, levels, osc_beta, grid, format);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
