// exactmg: two-grid / multigrid analysis for the 1D Poisson problem.
//
//   exactmg solve    --n 33 --weights 1,0.5
//   exactmg spectrum --n 33 --weights 2/3,2/3 --format json -o spectrum.json
//   exactmg verify   [--n 9]
//   exactmg figure   [--n 33] [-o figure1]

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "exactmg/cli.hpp"

namespace {

using exactmg::cli::CliConfig;
using exactmg::cli::Command;
using exactmg::cli::Format;
using exactmg::cli::Rhs;

void add_weights(CLI::App* sub, std::string& weights_text) {
  sub->add_option("-w,--weights", weights_text,
                  "Comma-separated Jacobi weights applied in order; p/q rationals accepted")
      ->capture_default_str();
}

void add_output(CLI::App* sub, std::string& output_text) {
  sub->add_option("-o,--output", output_text, "Output file (stdout when omitted)");
}

const std::map<std::string, Format> kFormats{
    {"csv", Format::csv}, {"json", Format::json}, {"svg", Format::svg}};

}  // namespace

int main(int argc, char** argv) {
  CliConfig cfg;
  std::string weights_text = "1,0.5";
  std::string output_text;
  std::vector<std::size_t> verify_sizes;

  CLI::App app{"Two-grid and multigrid analysis of weighted-Jacobi smoothing for 1D Poisson"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Solve a built-in Poisson problem with V-cycles");
  solve->add_option("-n,--n", cfg.n, "Grid points including boundaries (n - 1 a power of two)")
      ->capture_default_str();
  add_weights(solve, weights_text);
  solve->add_option("--tol", cfg.tol, "Relative residual tolerance")->capture_default_str();
  solve->add_option("--max-cycles", cfg.max_cycles, "Cycle limit")->capture_default_str();
  solve->add_option("--rhs", cfg.rhs, "Right-hand side: sine, constant or random")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Rhs>{{"sine", Rhs::sine}, {"constant", Rhs::constant}, {"random", Rhs::random}},
          CLI::ignore_case));
  solve->add_option("--format", cfg.format, "text (csv) or json")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  add_output(solve, output_text);

  auto* spectrum = app.add_subcommand("spectrum", "Closed-form two-grid spectrum with verification");
  spectrum->add_option("-n,--n", cfg.n, "Grid points including boundaries (odd, >= 5)")
      ->capture_default_str();
  add_weights(spectrum, weights_text);
  spectrum->add_option("--format", cfg.format, "csv or json")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  add_output(spectrum, output_text);

  auto* verify = app.add_subcommand("verify", "Run the operator-identity and solver checks");
  verify->add_option("-n,--n", verify_sizes, "Grid sizes to check (default 9 17 33)");
  verify->add_flag("--inject-fault", cfg.inject_fault, "Negative control")->group("");

  auto* figure = app.add_subcommand("figure", "Two-sweep smoother eigenvalue curves (CSV + SVG)");
  figure->add_option("-n,--n", cfg.n, "Grid points including boundaries")->capture_default_str();
  figure->add_option("--format", cfg.format, "Format printed to stdout: csv or svg")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  add_output(figure, output_text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exactmg::cli::kExitUsage;
  }

  if (solve->parsed()) cfg.command = Command::solve;
  if (spectrum->parsed()) cfg.command = Command::spectrum;
  if (verify->parsed()) cfg.command = Command::verify;
  if (figure->parsed()) cfg.command = Command::figure;

  if (!output_text.empty()) cfg.output_path = output_text;
  cfg.verify_sizes = verify_sizes;
  try {
    const auto sched = exactmg::parse_weights(weights_text);
    cfg.weights.assign(sched.weights().begin(), sched.weights().end());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exactmg::cli::kExitUsage;
  }

  return exactmg::cli::run(cfg, std::cout, std::cerr);
}
