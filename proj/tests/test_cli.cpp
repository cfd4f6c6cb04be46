#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "exactmg/cli.hpp"

using namespace exactmg;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code;
  std::string out;
};

/// Runs the installed binary through the shell, capturing stdout; stderr is discarded.
RunResult run_binary(const std::string& args) {
  const std::string cmd = std::string("\"") + EXACTMG_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() /
                       ("exactmg_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
  fs::create_directories(dir);
  return dir;
}

std::string field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + ": ");
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size() + 2;
  return text.substr(start, text.find('\n', start) - start);
}

}  // namespace

TEST(CliSolve, TwoThirdsNeedsAboutTwentyCycles) {
  const auto r = run_binary("solve --n 33 --weights 0.6667");
  EXPECT_EQ(r.code, 0);
  const int cycles = std::stoi(field(r.out, "cycles"));
  EXPECT_GE(cycles, 19);
  EXPECT_LE(cycles, 24);
  EXPECT_EQ(field(r.out, "converged"), "yes");
}

TEST(CliSolve, ExactScheduleConverges) {
  const auto r = run_binary("solve --n 33 --weights 1,0.5");
  EXPECT_EQ(r.code, 0);
  EXPECT_LE(std::stod(field(r.out, "relative_residual")), 1e-10);
  // The V-cycle with (1, 1/2) contracts by about 0.13 per cycle rather than solving in one.
  EXPECT_GT(std::stoi(field(r.out, "cycles")), 1);
}

TEST(CliSolve, ExitCodes) {
  EXPECT_EQ(run_binary("solve --n 6").code, 64);
  EXPECT_EQ(run_binary("solve --n 11").code, 64);
  EXPECT_EQ(run_binary("solve --n 33 --weights abc").code, 64);
  EXPECT_EQ(run_binary("solve --n 33 --bogus").code, 64);
  EXPECT_EQ(run_binary("").code, 64);
  EXPECT_EQ(run_binary("solve --n 33 --weights 0.6667 --max-cycles 3").code, 2);
  EXPECT_EQ(run_binary("solve --n 33 -o /nonexistent_dir/x.txt").code, 74);
}

TEST(CliSolve, JsonOutput) {
  const auto r = run_binary("solve --n 17 --weights 2/3 --format json --rhs constant");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["meta"]["n"], 17);
  EXPECT_EQ(j["rows"].size(), j["summary"]["cycles"].get<int>() + 1);
  // The scheme is exact for a quadratic solution.
  EXPECT_LE(j["summary"]["discretization_error"].get<double>(), 1e-9);
}

TEST(CliSpectrum, Radii) {
  {
    const auto r = run_binary("spectrum --n 17 --weights 0.6667 --format json");
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(nlohmann::json::parse(r.out)["summary"]["spectral_radius"].get<double>(), 1.0 / 3.0, 1e-3);
  }
  {
    const auto r = run_binary("spectrum --n 17 --weights 2/3 --format json");
    EXPECT_NEAR(nlohmann::json::parse(r.out)["summary"]["spectral_radius"].get<double>(), 1.0 / 3.0, 1e-6);
  }
  {
    const auto r = run_binary("spectrum --n 33 --weights 1,0.5 --format json");
    EXPECT_LE(nlohmann::json::parse(r.out)["summary"]["spectral_radius"].get<double>(), 1e-12);
  }
  {
    const auto r = run_binary("spectrum --n 33 --weights 0.6667,0.6667 --format json");
    const auto j = nlohmann::json::parse(r.out);
    for (const auto& row : j["rows"]) {
      if (row["branch"] == "low") EXPECT_NEAR(row["lambda_closed_form"].get<double>(), 1.0 / 9.0, 1e-4);
    }
  }
}

TEST(CliSpectrum, CsvRowCountAndErrors) {
  const auto r = run_binary("spectrum --n 33 --weights 2/3,2/3");
  ASSERT_EQ(r.code, 0);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "k,lambda_closed_form,eigen_residual,c_coefficient,branch");
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') ++rows;
  EXPECT_EQ(rows, 31);
  EXPECT_EQ(run_binary("spectrum --n 4").code, 64);
  EXPECT_EQ(run_binary("spectrum --n 9 -o /nonexistent_dir/s.csv").code, 74);
}

TEST(CliSpectrum, ByteIdenticalFiles) {
  const fs::path dir = scratch_dir();
  const auto a = dir / "a.json", b = dir / "b.json";
  ASSERT_EQ(run_binary("spectrum --n 33 --weights 0.9,0.4 --format json -o " + a.string()).code, 0);
  ASSERT_EQ(run_binary("spectrum --n 33 --weights 0.9,0.4 --format json -o " + b.string()).code, 0);
  EXPECT_EQ(read_file(a), read_file(b));
  EXPECT_FALSE(read_file(a).empty());
  fs::remove_all(dir);
}

TEST(CliVerify, DefaultPassesAndFaultFails) {
  const auto ok = run_binary("verify");
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out.find("FAIL"), std::string::npos);

  const auto bad = run_binary("verify --inject-fault");
  EXPECT_EQ(bad.code, 1);
  std::istringstream is(bad.out);
  int failures = 0;
  for (std::string line; std::getline(is, line);) {
    if (line.find("FAIL") == std::string::npos) continue;
    ++failures;
    EXPECT_NE(line.find("prolongation of coarse modes"), std::string::npos) << line;
  }
  EXPECT_EQ(failures, 3);
}

TEST(CliVerify, SingleSizeIsQuick) {
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(run_binary("verify --n 9").code, 0);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(1));
  EXPECT_EQ(run_binary("verify --n 8").code, 64);
}

TEST(CliFigure, WritesCsvAndSvg) {
  const fs::path dir = scratch_dir();
  const auto r = run_binary("figure -o " + (dir / "fig").string());
  ASSERT_EQ(r.code, 0);
  const std::string csv = read_file(dir / "fig.csv");
  const std::string svg = read_file(dir / "fig.svg");
  EXPECT_EQ(csv.rfind("k,lambda_s_23_23,lambda_s_1_05\n", 0), 0u);
  EXPECT_NE(csv.find("\n16,0.111111111111111,"), std::string::npos);
  EXPECT_NE(csv.find("\n21,"), std::string::npos);
  EXPECT_NE(csv.find("\n31,"), std::string::npos);
  EXPECT_EQ(csv.find("\n32,"), std::string::npos);
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_EQ(run_binary("figure -o /nonexistent_dir/fig").code, 74);
  fs::remove_all(dir);
}

TEST(CliFigure, StdoutMatchesLibrary) {
  const auto r = run_binary("figure");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, figure_csv(figure_data(Grid1D(33))));
  EXPECT_EQ(run_binary("figure --format svg").out, figure_svg(figure_data(Grid1D(33))));
}

// In-process: same entry point the binary uses.
TEST(CliRun, InProcessMatchesBinary) {
  cli::CliConfig cfg;
  cfg.command = cli::Command::spectrum;
  cfg.n = 17;
  cfg.weights = {2.0 / 3.0};
  std::ostringstream out, err;
  EXPECT_EQ(cli::run(cfg, out, err), cli::kExitOk);
  EXPECT_EQ(out.str(), run_binary("spectrum --n 17 --weights 2/3").out);

  cfg.command = cli::Command::spectrum;
  cfg.format = cli::Format::svg;
  EXPECT_EQ(cli::run(cfg, out, err), cli::kExitUsage);
}
