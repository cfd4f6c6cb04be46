#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "exactmg/cycles.hpp"
#include "exactmg/smoother.hpp"
#include "exactmg/spectral.hpp"

namespace exactmg {

/// 15 significant digits, '.' separator, independent of the global locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline double parse_decimal(std::string_view token) {
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw configuration_error("cannot parse weight '" + std::string(token) + "'");
  }
  return v;
}

}  // namespace detail

/// Comma-separated weights; each entry is a decimal or a rational p/q.
inline WeightSchedule parse_weights(std::string_view text) {
  std::vector<double> weights;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view token = detail::trim(text.substr(0, comma));
    if (token.empty()) throw configuration_error("empty weight in schedule");
    const auto slash = token.find('/');
    if (slash == std::string_view::npos) {
      weights.push_back(detail::parse_decimal(token));
    } else {
      const double num = detail::parse_decimal(detail::trim(token.substr(0, slash)));
      const double den = detail::parse_decimal(detail::trim(token.substr(slash + 1)));
      if (den == 0.0) throw configuration_error("zero denominator in weight '" + std::string(token) + "'");
      weights.push_back(num / den);
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return WeightSchedule(std::move(weights));
}

inline std::string schedule_label(const WeightSchedule& sched) {
  std::string out = "(";
  for (std::size_t i = 0; i < sched.size(); ++i) {
    if (i) out += ",";
    out += format_number(sched[i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Spectrum report
// ---------------------------------------------------------------------------

inline std::string spectrum_csv(const SpectrumReport& rep) {
  std::ostringstream os;
  os << "k,lambda_closed_form,eigen_residual,c_coefficient,branch\n";
  for (const auto& p : rep.pairs) {
    os << p.k << ',' << format_number(p.eigenvalue) << ',' << format_number(p.residual) << ','
       << format_number(p.c_coefficient) << ',' << to_string(p.branch) << '\n';
  }
  os << "# spectral_radius," << format_number(rep.spectral_radius) << '\n';
  os << "# spectral_radius_mode," << rep.spectral_radius_mode << '\n';
  os << "# power_iteration_radius," << format_number(rep.power_iteration.radius_estimate) << '\n';
  os << "# max_eigen_residual," << format_number(rep.max_residual) << '\n';
  os << "# matrix_max_abs_entry," << format_number(rep.matrix_max_abs_entry) << '\n';
  os << "# matrix_squared_max_abs_entry," << format_number(rep.matrix_squared_max_abs_entry) << '\n';
  os << "# defective_pairs," << rep.defective_pairs << '\n';
  return os.str();
}

namespace detail {

/// NaN and infinities have no JSON number form.
inline nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace detail

inline nlohmann::json spectrum_json(const SpectrumReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : rep.pairs) {
    rows.push_back({{"k", p.k},
                    {"lambda_closed_form", detail::json_number(p.eigenvalue)},
                    {"eigen_residual", detail::json_number(p.residual)},
                    {"c_coefficient", detail::json_number(p.c_coefficient)},
                    {"branch", to_string(p.branch)},
                    {"defective", p.defective}});
  }
  const std::vector<double> weights(rep.schedule.weights().begin(), rep.schedule.weights().end());
  return {{"meta", {{"command", "spectrum"}, {"n", rep.n}, {"weights", weights}}},
          {"rows", rows},
          {"summary",
           {{"spectral_radius", rep.spectral_radius},
            {"spectral_radius_mode", rep.spectral_radius_mode},
            {"power_iteration_radius", rep.power_iteration.radius_estimate},
            {"power_iteration_iterations", rep.power_iteration.iterations_used},
            {"power_iteration_collapsed", rep.power_iteration.collapsed},
            {"max_eigen_residual", rep.max_residual},
            {"matrix_max_abs_entry", rep.matrix_max_abs_entry},
            {"matrix_squared_max_abs_entry", rep.matrix_squared_max_abs_entry},
            {"defective_pairs", rep.defective_pairs},
            {"verified", rep.verified}}}};
}

// ---------------------------------------------------------------------------
// Solve report
// ---------------------------------------------------------------------------

inline nlohmann::json solve_json(std::size_t n, const WeightSchedule& sched, double tol,
                                 const SolveReport& rep, double relative_residual,
                                 std::optional<double> discretization_error) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < rep.residual_history.size(); ++i) {
    rows.push_back({{"cycle", i}, {"residual_inf", rep.residual_history[i]}});
  }
  const std::vector<double> weights(sched.weights().begin(), sched.weights().end());
  nlohmann::json summary = {{"cycles", rep.iterations},
                            {"converged", rep.converged},
                            {"relative_residual", relative_residual},
                            {"error_vs_direct", rep.final_error ? nlohmann::json(*rep.final_error)
                                                                : nlohmann::json(nullptr)}};
  if (discretization_error) summary["discretization_error"] = *discretization_error;
  return {{"meta", {{"command", "solve"}, {"n", n}, {"weights", weights}, {"tol", tol}}},
          {"rows", rows},
          {"summary", summary}};
}

// ---------------------------------------------------------------------------
// Two-sweep smoother eigenvalue figure
// ---------------------------------------------------------------------------

struct FigureRow {
  std::size_t k;
  double two_thirds_twice;  // S(2/3, 2/3)
  double one_then_half;     // S(1, 1/2)
};

struct FigureExtremum {
  std::size_t k = 0;
  double value = 0.0;
};

struct FigureData {
  std::size_t n = 0;
  std::vector<FigureRow> rows;
  /// Largest |lambda| over the oscillatory modes k >= (n-1)/2, for each curve.
  FigureExtremum oscillatory_max_two_thirds;
  FigureExtremum oscillatory_max_one_half;
};

inline FigureData figure_data(const Grid1D& grid) {
  const WeightSchedule twice{2.0 / 3.0, 2.0 / 3.0};
  const WeightSchedule exact{1.0, 0.5};
  FigureData fig;
  fig.n = grid.points();
  for (std::size_t k = 1; k <= grid.unknowns(); ++k) {
    FigureRow row{k, smoother_eigenvalue(grid, k, twice), smoother_eigenvalue(grid, k, exact)};
    fig.rows.push_back(row);
    if (k < grid.middle_mode()) continue;
    if (std::abs(row.two_thirds_twice) > std::abs(fig.oscillatory_max_two_thirds.value) ||
        fig.oscillatory_max_two_thirds.k == 0) {
      fig.oscillatory_max_two_thirds = {k, row.two_thirds_twice};
    }
    if (std::abs(row.one_then_half) > std::abs(fig.oscillatory_max_one_half.value) ||
        fig.oscillatory_max_one_half.k == 0) {
      fig.oscillatory_max_one_half = {k, row.one_then_half};
    }
  }
  return fig;
}

inline std::string figure_csv(const FigureData& fig) {
  std::ostringstream os;
  os << "k,lambda_s_23_23,lambda_s_1_05\n";
  for (const auto& r : fig.rows) {
    os << r.k << ',' << format_number(r.two_thirds_twice) << ',' << format_number(r.one_then_half)
       << '\n';
  }
  os << "# oscillatory_max_abs,lambda_s_23_23," << fig.oscillatory_max_two_thirds.k << ','
     << format_number(fig.oscillatory_max_two_thirds.value) << '\n';
  os << "# oscillatory_max_abs,lambda_s_1_05," << fig.oscillatory_max_one_half.k << ','
     << format_number(fig.oscillatory_max_one_half.value) << '\n';
  return os.str();
}

/// Line chart of both curves, drawn as if continuous in k.
inline std::string figure_svg(const FigureData& fig) {
  constexpr double width = 640, height = 420;
  constexpr double left = 70, right = 20, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  const double k_min = 1.0;
  const double k_max = static_cast<double>(std::max<std::size_t>(fig.rows.size(), 2));
  double y_min = 0.0, y_max = 1.0;
  for (const auto& r : fig.rows) {
    y_min = std::min({y_min, r.two_thirds_twice, r.one_then_half});
    y_max = std::max({y_max, r.two_thirds_twice, r.one_then_half});
  }
  y_min = std::floor(y_min * 10.0) / 10.0;
  y_max = std::ceil(y_max * 10.0) / 10.0;

  auto sx = [&](double k) { return left + (k - k_min) / (k_max - k_min) * plot_w; };
  auto sy = [&](double v) { return top + (y_max - v) / (y_max - y_min) * plot_h; };
  auto num = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width)
     << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height)
     << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << num(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\""
     << " font-family=\"sans-serif\">Two-sweep weighted Jacobi eigenvalues, n = " << fig.n
     << "</text>\n";

  // Axes and ticks.
  os << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
     << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + plot_h) << "\" x2=\""
     << num(left + plot_w) << "\" y2=\"" << num(top + plot_h) << "\"/>\n"
     << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left)
     << "\" y2=\"" << num(top + plot_h) << "\"/>\n";
  if (y_min < 0.0 && y_max > 0.0) {
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(sy(0.0)) << "\" x2=\""
       << num(left + plot_w) << "\" y2=\"" << num(sy(0.0))
       << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  }
  os << "</g>\n<g font-size=\"11\" font-family=\"sans-serif\">\n";
  const std::size_t k_step = fig.rows.size() > 40 ? 10 : 5;
  for (std::size_t k = k_step; k <= fig.rows.size(); k += k_step) {
    const double x = sx(static_cast<double>(k));
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(top + plot_h) << "\" x2=\"" << num(x)
       << "\" y2=\"" << num(top + plot_h + 5) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << num(x) << "\" y=\"" << num(top + plot_h + 18)
       << "\" text-anchor=\"middle\">" << k << "</text>\n";
  }
  const int y_ticks = static_cast<int>(std::lround((y_max - y_min) / 0.2));
  for (int i = 0; i <= y_ticks; ++i) {
    const double v = y_min + 0.2 * i;
    os << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(sy(v)) << "\" x2=\"" << num(left)
       << "\" y2=\"" << num(sy(v)) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << num(left - 8) << "\" y=\"" << num(sy(v) + 4)
       << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
  }
  os << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(height - 15)
     << "\" text-anchor=\"middle\">k</text>\n"
     << "<text x=\"18\" y=\"" << num(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << num(top + plot_h / 2) << ")\">eigenvalue</text>\n</g>\n";

  auto polyline = [&](auto value, const char* colour) {
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < fig.rows.size(); ++i) {
      if (i) os << ' ';
      os << num(sx(static_cast<double>(fig.rows[i].k))) << ',' << num(sy(value(fig.rows[i])));
    }
    os << "\"/>\n";
  };
  polyline([](const FigureRow& r) { return r.two_thirds_twice; }, "#1f77b4");
  polyline([](const FigureRow& r) { return r.one_then_half; }, "#d62728");

  auto marker = [&](const FigureExtremum& m, const char* colour) {
    os << "<circle cx=\"" << num(sx(static_cast<double>(m.k))) << "\" cy=\"" << num(sy(m.value))
       << "\" r=\"4\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"/>\n";
  };
  marker(fig.oscillatory_max_two_thirds, "#1f77b4");
  marker(fig.oscillatory_max_one_half, "#d62728");

  os << "<g font-size=\"12\" font-family=\"sans-serif\">\n"
     << "<line x1=\"" << num(left + plot_w - 170) << "\" y1=\"" << num(top + 12) << "\" x2=\""
     << num(left + plot_w - 145) << "\" y2=\"" << num(top + 12)
     << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n"
     << "<text x=\"" << num(left + plot_w - 140) << "\" y=\"" << num(top + 16)
     << "\">S(2/3, 2/3)</text>\n"
     << "<line x1=\"" << num(left + plot_w - 170) << "\" y1=\"" << num(top + 30) << "\" x2=\""
     << num(left + plot_w - 145) << "\" y2=\"" << num(top + 30)
     << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n"
     << "<text x=\"" << num(left + plot_w - 140) << "\" y=\"" << num(top + 34)
     << "\">S(1, 1/2)</text>\n</g>\n"
     << "</svg>\n";
  return os.str();
}

}  // namespace exactmg
