#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "exactmg/cycles.hpp"
#include "exactmg/discretization.hpp"
#include "exactmg/output.hpp"
#include "exactmg/spectral.hpp"
#include "exactmg/verify.hpp"

namespace exactmg::cli {

// sysexits-style codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitNotConverged = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 74;

enum class Command { solve, spectrum, verify, figure };
enum class Format { csv, json, svg };
enum class Rhs { sine, constant, random };

struct CliConfig {
  Command command = Command::solve;
  std::size_t n = 33;
  std::vector<double> weights{1.0, 0.5};
  double tol = 1e-10;
  int max_cycles = 100;
  std::optional<std::filesystem::path> output_path;
  Format format = Format::csv;
  Rhs rhs = Rhs::sine;
  /// verify only; defaults to 9, 17 and 33 when empty.
  std::vector<std::size_t> verify_sizes;
  bool inject_fault = false;
};

namespace detail {

/// Writes to the requested file, or to `out` when no path is set.
/// Returns false on IO failure.
inline bool emit(const std::optional<std::filesystem::path>& path, const std::string& text,
                 std::ostream& out) {
  if (!path) {
    out << text;
    return static_cast<bool>(out);
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) return false;
  file << text;
  file.close();
  return static_cast<bool>(file);
}

inline PoissonProblem builtin_problem(const Grid1D& grid, Rhs rhs) {
  using std::numbers::pi;
  switch (rhs) {
    case Rhs::constant:
      // -u'' = 1 has u = x(1 - x)/2, which the scheme reproduces exactly at the nodes.
      return make_problem(grid, [](double) { return 1.0; },
                          [](double x) { return 0.5 * x * (1.0 - x); });
    case Rhs::random: {
      auto p = make_problem(grid, [](double) { return 0.0; });
      std::mt19937_64 rng(12345);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      for (double& v : p.rhs_values) v = dist(rng);
      return p;
    }
    case Rhs::sine:
    default:
      return make_problem(grid, [](double x) { return pi * pi * std::sin(pi * x); },
                          [](double x) { return std::sin(pi * x); });
  }
}

}  // namespace detail

inline int cmd_solve(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<Grid1D> grid;
  std::optional<WeightSchedule> sched;
  try {
    grid.emplace(cfg.n);
    if (!grid->power_of_two_exponent()) {
      throw configuration_error("solve: n - 1 must be a power of two, got n = " + std::to_string(cfg.n));
    }
    sched.emplace(cfg.weights);
    if (!(cfg.tol > 0.0) || cfg.max_cycles < 0) {
      throw configuration_error("solve: tol must be positive and max-cycles non-negative");
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const PoissonProblem problem = detail::builtin_problem(*grid, cfg.rhs);
  const SolveResult result = solve(problem, *sched, cfg.tol, cfg.max_cycles);
  const TridiagonalMatrix a = assemble_stiffness(*grid);
  const double rel = relative_residual(a, result.solution, problem.rhs_values);
  std::optional<double> disc_error;
  if (problem.exact_solution) {
    disc_error = norm_inf(subtract(result.solution, *problem.exact_solution));
  }

  std::string text;
  if (cfg.format == Format::json) {
    text = solve_json(cfg.n, *sched, cfg.tol, result.report, rel, disc_error).dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "n: " << cfg.n << '\n'
       << "weights: " << schedule_label(*sched) << '\n'
       << "cycles: " << result.report.iterations << '\n'
       << "converged: " << (result.report.converged ? "yes" : "no") << '\n'
       << "relative_residual: " << format_number(rel) << '\n'
       << "error_vs_direct: " << format_number(result.report.final_error.value_or(NAN)) << '\n';
    if (disc_error) os << "discretization_error: " << format_number(*disc_error) << '\n';
    os << "residual_history:\n";
    for (std::size_t i = 0; i < result.report.residual_history.size(); ++i) {
      os << "  " << i << ' ' << format_number(result.report.residual_history[i]) << '\n';
    }
    text = os.str();
  }
  if (!detail::emit(cfg.output_path, text, out)) {
    err << "error: cannot write " << cfg.output_path->string() << '\n';
    return kExitIo;
  }
  return result.report.converged ? kExitOk : kExitNotConverged;
}

inline int cmd_spectrum(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<Grid1D> grid;
  std::optional<WeightSchedule> sched;
  try {
    grid.emplace(cfg.n);
    sched.emplace(cfg.weights);
    if (cfg.format == Format::svg) throw configuration_error("spectrum: format must be csv or json");
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const SpectrumReport rep = build_spectrum_report(*grid, *sched);
  const std::string text =
      cfg.format == Format::json ? spectrum_json(rep).dump(2) + "\n" : spectrum_csv(rep);
  if (!detail::emit(cfg.output_path, text, out)) {
    err << "error: cannot write " << cfg.output_path->string() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

inline int cmd_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  VerifyOptions opts;
  if (!cfg.verify_sizes.empty()) opts.sizes = cfg.verify_sizes;
  opts.flip_prolongation_sign = cfg.inject_fault;
  try {
    for (std::size_t n : opts.sizes) static_cast<void>(Grid1D(n));
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto results = run_verification(opts);
  bool all_pass = true;
  out << std::left << std::setw(6) << "n" << std::setw(52) << "check" << std::setw(24)
      << "max_residual" << std::setw(10) << "tolerance"
      << "  result\n";
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    out << std::left << std::setw(6) << (r.n ? std::to_string(r.n) : std::string("-"))
        << std::setw(52) << r.name << std::setw(24) << format_number(r.max_residual) << std::setw(10)
        << format_number(r.tolerance) << "  " << (r.pass ? "PASS" : "FAIL") << '\n';
  }
  if (!all_pass) {
    err << "verification failed:\n";
    for (const auto& r : results) {
      if (!r.pass) {
        err << "  " << r.name << " (n = " << r.n << "): max residual "
            << format_number(r.max_residual) << " > " << format_number(r.tolerance) << '\n';
      }
    }
    return kExitFailure;
  }
  out << "all " << results.size() << " checks passed\n";
  return kExitOk;
}

/// With an output path, writes <path>.csv and <path>.svg; otherwise prints the
/// CSV (or the SVG with --format svg) to `out`.
inline int cmd_figure(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<Grid1D> grid;
  try {
    grid.emplace(cfg.n);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const FigureData fig = figure_data(*grid);
  if (!cfg.output_path) {
    out << (cfg.format == Format::svg ? figure_svg(fig) : figure_csv(fig));
    return kExitOk;
  }
  auto base = *cfg.output_path;
  if (base.extension() == ".csv" || base.extension() == ".svg") base.replace_extension();
  auto csv_path = base, svg_path = base;
  csv_path += ".csv";
  svg_path += ".svg";
  for (const auto& [path, text] : {std::pair{csv_path, figure_csv(fig)}, std::pair{svg_path, figure_svg(fig)}}) {
    if (!detail::emit(path, text, out)) {
      err << "error: cannot write " << path.string() << '\n';
      return kExitIo;
    }
  }
  out << "wrote " << csv_path.string() << " and " << svg_path.string() << '\n';
  return kExitOk;
}

inline int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.command) {
    case Command::solve:
      return cmd_solve(cfg, out, err);
    case Command::spectrum:
      return cmd_spectrum(cfg, out, err);
    case Command::verify:
      return cmd_verify(cfg, out, err);
    case Command::figure:
      return cmd_figure(cfg, out, err);
  }
  return kExitUsage;
}

}  // namespace exactmg::cli
