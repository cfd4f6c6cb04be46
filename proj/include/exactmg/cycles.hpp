#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exactmg/discretization.hpp"
#include "exactmg/linalg.hpp"
#include "exactmg/smoother.hpp"
#include "exactmg/transfer.hpp"

namespace exactmg {

enum class CoarseSolver { direct };

struct TwoGridConfig {
  WeightSchedule schedule;
  CoarseSolver coarse_solver = CoarseSolver::direct;
};

struct Level {
  std::size_t unknowns;
  double spacing;
  TridiagonalMatrix A;
};

/// Level 0 is the finest. Every coarser operator is the Galerkin product of the
/// one above it; the last level is solved directly. Immutable once built.
class MultigridHierarchy {
 public:
  /// depth is the number of levels. Two levels work for any valid grid; deeper
  /// hierarchies need n - 1 = 2^p and depth <= p. nullopt coarsens to one unknown.
  static MultigridHierarchy build(const Grid1D& grid, std::optional<std::size_t> depth) {
    const auto p = grid.power_of_two_exponent();
    std::size_t levels = 0;
    if (!depth) {
      if (!p) {
        throw configuration_error("build_hierarchy: automatic depth needs n - 1 to be a power of two, n = " +
                                  std::to_string(grid.points()));
      }
      levels = *p;
    } else {
      levels = *depth;
      if (levels < 2) throw configuration_error("build_hierarchy: depth must be at least 2");
      if (levels > 2 && (!p || levels > *p)) {
        throw configuration_error("build_hierarchy: grid with n = " + std::to_string(grid.points()) +
                                  " cannot be coarsened to depth " + std::to_string(levels));
      }
    }

    MultigridHierarchy h;
    h.levels_.push_back({grid.unknowns(), grid.spacing(), assemble_stiffness(grid)});
    while (h.levels_.size() < levels) {
      const Level& fine = h.levels_.back();
      const auto p_op = Prolongation::for_fine(fine.unknowns);
      h.transfers_.push_back(p_op);
      h.levels_.push_back({p_op.coarse_dim(), 2.0 * fine.spacing, galerkin_coarse(fine.A, p_op)});
    }
    return h;
  }

  std::size_t depth() const { return levels_.size(); }
  const Level& level(std::size_t l) const { return levels_.at(l); }
  std::span<const Level> levels() const { return levels_; }
  /// Transfer between level l and level l + 1.
  const Prolongation& prolongation(std::size_t l) const { return transfers_.at(l); }
  Restriction restriction(std::size_t l) const { return transfers_.at(l).transpose(); }
  std::size_t coarsest_dim() const { return levels_.back().unknowns; }

 private:
  MultigridHierarchy() = default;

  std::vector<Level> levels_;
  std::vector<Prolongation> transfers_;
};

inline MultigridHierarchy build_hierarchy(const Grid1D& grid,
                                          std::optional<std::size_t> depth = std::nullopt) {
  return MultigridHierarchy::build(grid, depth);
}

namespace detail {

inline Vector cycle_level(const MultigridHierarchy& hier, std::size_t l, std::span<const double> u,
                          std::span<const double> f, const WeightSchedule& sched) {
  const Level& lev = hier.level(l);
  if (l + 1 == hier.depth()) return thomas_solve(lev.A, f);

  Vector smoothed = apply_schedule(lev.A, u, f, sched);
  const Vector r = residual(lev.A, smoothed, f);
  const Vector r_coarse = restrict_to_coarse(hier.restriction(l), r);
  const Vector zero(r_coarse.size(), 0.0);
  const Vector e_coarse = cycle_level(hier, l + 1, zero, r_coarse, sched);
  const Vector correction = prolong(hier.prolongation(l), e_coarse);
  for (std::size_t i = 0; i < smoothed.size(); ++i) smoothed[i] += correction[i];
  return smoothed;
}

inline void require_fine_lengths(const MultigridHierarchy& hier, std::span<const double> u,
                                 std::span<const double> f, const char* what) {
  require_same_length(hier.level(0).unknowns, u.size(), what);
  require_same_length(hier.level(0).unknowns, f.size(), what);
}

}  // namespace detail

/// Pre-smoothing-only V-cycle: smooth, restrict the residual, recurse from a
/// zero guess, prolong and correct. No post-smoothing.
inline Vector v_cycle(const MultigridHierarchy& hier, std::span<const double> u,
                      std::span<const double> f, const WeightSchedule& sched) {
  detail::require_fine_lengths(hier, u, f, "v_cycle");
  return detail::cycle_level(hier, 0, u, f, sched);
}

inline Vector two_grid_cycle(const MultigridHierarchy& hier, std::span<const double> u,
                             std::span<const double> f, const TwoGridConfig& cfg) {
  if (hier.depth() != 2) {
    throw configuration_error("two_grid_cycle: hierarchy has " + std::to_string(hier.depth()) +
                              " levels, expected 2");
  }
  detail::require_fine_lengths(hier, u, f, "two_grid_cycle");
  return detail::cycle_level(hier, 0, u, f, cfg.schedule);
}

struct SolveReport {
  int iterations = 0;
  /// ||f - A u||_inf before the first cycle and after every cycle.
  std::vector<double> residual_history;
  /// ||u - A^{-1} f||_inf against the direct tridiagonal solve.
  std::optional<double> final_error;
  bool converged = false;
};

struct SolveResult {
  Vector solution;
  SolveReport report;
};

/// ||f - A u||_inf relative to ||f||_inf, or absolute when f = 0.
inline double relative_residual(const TridiagonalMatrix& a, std::span<const double> u,
                                std::span<const double> f) {
  const double r = norm_inf(residual(a, u, f));
  const double scale = norm_inf(f);
  return scale > 0.0 ? r / scale : r;
}

/// V-cycles from a zero initial guess until the relative residual is at most tol.
/// Running out of cycles is reported through report.converged, and the iterate with
/// the smallest residual is returned.
inline SolveResult solve(const PoissonProblem& problem, const WeightSchedule& sched, double tol,
                         int max_cycles) {
  if (!(tol > 0.0)) throw configuration_error("solve: tol must be positive");
  const auto hier = build_hierarchy(problem.grid);
  const TridiagonalMatrix& a = hier.level(0).A;
  const Vector& f = problem.rhs_values;
  const double f_scale = norm_inf(f);

  SolveResult out{Vector(a.size(), 0.0), {}};
  Vector u = out.solution;
  double best = std::numeric_limits<double>::infinity();

  auto record = [&](const Vector& iterate) {
    const double r = norm_inf(residual(a, iterate, f));
    out.report.residual_history.push_back(r);
    if (r < best) {
      best = r;
      out.solution = iterate;
    }
    return f_scale > 0.0 ? r / f_scale : r;
  };

  double rel = record(u);
  while (rel > tol && out.report.iterations < max_cycles) {
    u = v_cycle(hier, u, f, sched);
    ++out.report.iterations;
    rel = record(u);
  }
  out.report.converged = rel <= tol;
  if (out.report.converged) out.solution = u;
  out.report.final_error = norm_inf(subtract(out.solution, thomas_solve(a, f)));
  return out;
}

}  // namespace exactmg
