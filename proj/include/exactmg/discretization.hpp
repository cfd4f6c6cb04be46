#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "exactmg/linalg.hpp"

namespace exactmg {

/// Uniform grid on [0, 1] with n points including both boundaries. Only the
/// n - 2 interior points carry unknowns; boundary values are zero.
class Grid1D {
 public:
  explicit Grid1D(std::size_t points) : points_(points) {
    if (points < 5 || points % 2 == 0) {
      throw configuration_error("Grid1D: point count must be odd and >= 5, got " +
                                std::to_string(points));
    }
  }

  std::size_t points() const { return points_; }
  std::size_t intervals() const { return points_ - 1; }
  double spacing() const { return 1.0 / static_cast<double>(intervals()); }
  /// 1/h^2, exact in double for every grid we can hold.
  double inv_spacing_squared() const {
    const double m = static_cast<double>(intervals());
    return m * m;
  }

  std::size_t unknowns() const { return points_ - 2; }
  std::size_t coarse_unknowns() const { return (points_ - 3) / 2; }
  /// (n - 1) / 2, the self-complementary mode index.
  std::size_t middle_mode() const { return intervals() / 2; }

  double node(std::size_t j) const { return static_cast<double>(j) * spacing(); }

  /// p when n - 1 = 2^p, otherwise nullopt.
  std::optional<std::size_t> power_of_two_exponent() const {
    const std::size_t m = intervals();
    if (!std::has_single_bit(m)) return std::nullopt;
    return static_cast<std::size_t>(std::countr_zero(m));
  }

  Grid1D coarsened() const { return Grid1D((points_ + 1) / 2); }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  std::size_t points_;
};

namespace detail {

inline void require_mode(const Grid1D& grid, std::size_t k, const char* what) {
  if (k < 1 || k > grid.unknowns()) {
    throw index_error(std::string(what) + ": mode " + std::to_string(k) + " outside 1.." +
                      std::to_string(grid.unknowns()));
  }
}

}  // namespace detail

/// sin^2(k pi h / 2)
inline double mode_sin2(const Grid1D& grid, std::size_t k) {
  const double s = std::sin(static_cast<double>(k) * std::numbers::pi /
                            (2.0 * static_cast<double>(grid.intervals())));
  return s * s;
}

/// cos^2(k pi h / 2), which equals sin^2 of the complementary mode n - 1 - k.
inline double mode_cos2(const Grid1D& grid, std::size_t k) {
  const double c = std::cos(static_cast<double>(k) * std::numbers::pi /
                            (2.0 * static_cast<double>(grid.intervals())));
  return c * c;
}

/// Index of the mode paired with k under the aliasing k <-> n - 1 - k.
inline std::size_t complementary_mode(const Grid1D& grid, std::size_t k) {
  detail::require_mode(grid, k, "complementary_mode");
  return grid.intervals() - k;
}

/// (1/h^2) tridiag(-1, 2, -1) on the interior unknowns.
inline TridiagonalMatrix assemble_stiffness(const Grid1D& grid) {
  const double s = grid.inv_spacing_squared();
  return TridiagonalMatrix::constant(grid.unknowns(), -s, 2.0 * s, -s);
}

/// Sine mode v_k with entries sin(j k pi / (n - 1)), j = 1..n-2.
inline Vector eigenvector(const Grid1D& grid, std::size_t k) {
  detail::require_mode(grid, k, "eigenvector");
  const std::size_t n_int = grid.unknowns();
  const double m = static_cast<double>(grid.intervals());
  Vector v(n_int);
  for (std::size_t j = 1; j <= n_int; ++j) {
    v[j - 1] = std::sin(static_cast<double>(j * k) * std::numbers::pi / m);
  }
  return v;
}

inline double eigenvalue_A(const Grid1D& grid, std::size_t k) {
  detail::require_mode(grid, k, "eigenvalue_A");
  return 4.0 * grid.inv_spacing_squared() * mode_sin2(grid, k);
}

struct PoissonProblem {
  Grid1D grid;
  Vector rhs_values;
  std::optional<Vector> exact_solution;
};

/// Samples f (and optionally u) at the interior nodes of the grid.
inline PoissonProblem make_problem(const Grid1D& grid, const std::function<double(double)>& f,
                                   const std::function<double(double)>& u_exact = {}) {
  PoissonProblem p{grid, Vector(grid.unknowns()), std::nullopt};
  for (std::size_t j = 1; j <= grid.unknowns(); ++j) p.rhs_values[j - 1] = f(grid.node(j));
  if (u_exact) {
    Vector u(grid.unknowns());
    for (std::size_t j = 1; j <= grid.unknowns(); ++j) u[j - 1] = u_exact(grid.node(j));
    p.exact_solution = std::move(u);
  }
  return p;
}

}  // namespace exactmg
