#include <clocale>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "exactmg/output.hpp"

using namespace exactmg;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

TEST(FormatNumber, FifteenSignificantDigits) {
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333333");
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.124590926667899), "-0.124590926667899");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(NAN), "nan");
  EXPECT_EQ(format_number(-INFINITY), "-inf");
}

TEST(FormatNumber, IgnoresLocale) {
  const char* previous = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = previous ? previous : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") == nullptr) GTEST_SKIP() << "locale not installed";
  EXPECT_EQ(format_number(0.5), "0.5");
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST(ParseWeights, DecimalsAndRationals) {
  EXPECT_EQ(parse_weights("1,0.5"), (WeightSchedule{1.0, 0.5}));
  EXPECT_EQ(parse_weights("2/3, 2/3"), (WeightSchedule{2.0 / 3.0, 2.0 / 3.0}));
  EXPECT_EQ(parse_weights("0.6667"), (WeightSchedule{0.6667}));
  EXPECT_EQ(parse_weights("-1/2"), (WeightSchedule{-0.5}));
}

TEST(ParseWeights, Rejects) {
  for (const char* bad : {"", "1,", ",1", "abc", "1/0", "1/", "0.5x", "1,,2"}) {
    EXPECT_THROW(parse_weights(bad), configuration_error) << bad;
  }
}

TEST(SpectrumCsv, HeaderRowsAndFooters) {
  const auto rep = build_spectrum_report(Grid1D(17), {2.0 / 3.0});
  const auto ls = lines(spectrum_csv(rep));
  ASSERT_FALSE(ls.empty());
  EXPECT_EQ(ls[0], "k,lambda_closed_form,eigen_residual,c_coefficient,branch");
  std::size_t data = 0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    if (ls[i].rfind("#", 0) == 0) continue;
    ++data;
    const auto cells = split(ls[i], ',');
    ASSERT_EQ(cells.size(), 5u) << ls[i];
    EXPECT_EQ(std::stoul(cells[0]), data);
    EXPECT_EQ(cells[4], data <= 8 ? "low" : "high");
  }
  EXPECT_EQ(data, 15u);
  EXPECT_NE(spectrum_csv(rep).find("# spectral_radius,0.333333333333333\n"), std::string::npos);
  EXPECT_NE(spectrum_csv(rep).find("# power_iteration_radius,"), std::string::npos);
  EXPECT_EQ(spectrum_csv(rep).find('\r'), std::string::npos);
}

TEST(SpectrumJson, Schema) {
  const auto rep = build_spectrum_report(Grid1D(17), {1.0, 0.5});
  const auto j = spectrum_json(rep);
  EXPECT_EQ(j["meta"]["command"], "spectrum");
  EXPECT_EQ(j["meta"]["n"], 17);
  EXPECT_EQ(j["meta"]["weights"], nlohmann::json::array({1.0, 0.5}));
  ASSERT_EQ(j["rows"].size(), 15u);
  for (const auto& row : j["rows"]) {
    for (const char* key : {"k", "lambda_closed_form", "eigen_residual", "c_coefficient", "branch", "defective"}) {
      EXPECT_TRUE(row.contains(key)) << key;
    }
  }
  const auto& s = j["summary"];
  EXPECT_LE(s["spectral_radius"].get<double>(), 1e-12);
  EXPECT_EQ(s["defective_pairs"], 7);
  EXPECT_NEAR(s["matrix_max_abs_entry"].get<double>(), 0.125, 1e-12);
  EXPECT_TRUE(s["power_iteration_collapsed"].get<bool>());
  EXPECT_TRUE(s["verified"].get<bool>());
}

TEST(SolveJson, Schema) {
  const auto p = make_problem(Grid1D(17), [](double) { return 1.0; });
  const auto res = solve(p, {2.0 / 3.0}, 1e-8, 50);
  const auto j = solve_json(17, {2.0 / 3.0}, 1e-8, res.report, 1e-9, std::nullopt);
  EXPECT_EQ(j["meta"]["command"], "solve");
  EXPECT_EQ(j["rows"].size(), res.report.residual_history.size());
  EXPECT_EQ(j["rows"][0]["cycle"], 0);
  EXPECT_EQ(j["summary"]["cycles"], res.report.iterations);
  EXPECT_TRUE(j["summary"]["converged"].get<bool>());
  EXPECT_FALSE(j["summary"].contains("discretization_error"));
}

TEST(Figure, DataValues) {
  const auto fig = figure_data(Grid1D(33));
  ASSERT_EQ(fig.rows.size(), 31u);
  EXPECT_EQ(fig.rows.back().k, 31u);
  EXPECT_NEAR(fig.rows[20].one_then_half, -0.124590926667899, 1e-14);
  EXPECT_NEAR(fig.rows[15].two_thirds_twice, 1.0 / 9.0, 1e-15);
  EXPECT_EQ(fig.oscillatory_max_two_thirds.k, 16u);
  EXPECT_NEAR(fig.oscillatory_max_two_thirds.value, 1.0 / 9.0, 1e-12);
  EXPECT_EQ(fig.oscillatory_max_one_half.k, 21u);
}

TEST(Figure, CsvLayout) {
  const auto ls = lines(figure_csv(figure_data(Grid1D(33))));
  EXPECT_EQ(ls[0], "k,lambda_s_23_23,lambda_s_1_05");
  std::size_t data = 0;
  for (const auto& l : ls) {
    if (l.rfind("#", 0) == 0 || l == ls[0]) continue;
    ++data;
  }
  EXPECT_EQ(data, 31u);
  EXPECT_EQ(ls[16].rfind("16,0.111111111111111,", 0), 0u);
  EXPECT_EQ(ls[21].substr(0, 3), "21,");
  EXPECT_NE(ls[21].find(",-0.124590926667899"), std::string::npos);
}

TEST(Figure, SvgIsWellFormedEnough) {
  const std::string svg = figure_svg(figure_data(Grid1D(33)));
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\""), std::string::npos);
  std::size_t count = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++count;
  EXPECT_EQ(count, 2u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Output, Deterministic) {
  const auto a = spectrum_csv(build_spectrum_report(Grid1D(33), {2.0 / 3.0, 2.0 / 3.0}));
  const auto b = spectrum_csv(build_spectrum_report(Grid1D(33), {2.0 / 3.0, 2.0 / 3.0}));
  EXPECT_EQ(a, b);
  EXPECT_EQ(figure_svg(figure_data(Grid1D(33))), figure_svg(figure_data(Grid1D(33))));
}
