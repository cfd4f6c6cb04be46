#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "exactmg/cycles.hpp"
#include "exactmg/discretization.hpp"
#include "exactmg/smoother.hpp"
#include "exactmg/spectral.hpp"
#include "exactmg/transfer.hpp"

namespace exactmg {

struct CheckResult {
  std::string name;
  std::size_t n = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  std::vector<std::size_t> sizes{9, 17, 33};
  std::uint64_t seed = 20240531;
  /// Negative control: evaluate the interpolation identity with a prolongation
  /// whose in-between stencil has the wrong sign. That check must then fail.
  bool flip_prolongation_sign = false;
};

namespace detail {

inline Vector random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

inline Vector prolong_flipped(const Prolongation& op, std::span<const double> coarse) {
  Vector fine = prolong(op, coarse);
  for (std::size_t i = 0; i < fine.size(); i += 2) fine[i] = -fine[i];
  return fine;
}

class CheckCollector {
 public:
  explicit CheckCollector(std::vector<CheckResult>& out) : out_(out) {}

  void add(std::string name, std::size_t n, double residual, double tol) {
    out_.push_back({std::move(name), n, residual, tol, std::isfinite(residual) && residual <= tol});
  }

 private:
  std::vector<CheckResult>& out_;
};

}  // namespace detail

/// Runs every operator identity and solver property at each grid size.
inline std::vector<CheckResult> run_verification(const VerifyOptions& opts = {}) {
  std::vector<CheckResult> results;
  detail::CheckCollector check(results);
  std::mt19937_64 rng(opts.seed);

  const std::vector<WeightSchedule> schedules{{2.0 / 3.0}, {1.0}, {0.5}, {2.0 / 3.0, 2.0 / 3.0},
                                              {1.0, 0.5}, {0.9, 0.4}};

  for (std::size_t n : opts.sizes) {
    const Grid1D grid(n);
    const TridiagonalMatrix a = assemble_stiffness(grid);
    const auto p_op = Prolongation::for_grid(grid);
    const auto r_op = p_op.transpose();
    const std::size_t nm = grid.unknowns();
    const std::size_t nc = grid.coarse_unknowns();

    {
      const Vector b = detail::random_vector(rng, nm);
      const Vector x = thomas_solve(a, b);
      check.add("tridiagonal solve round trip", n, norm_inf(residual(a, x, b)) / norm_inf(b), 1e-12);
    }

    {
      double worst = 0.0;
      for (std::size_t k = 1; k <= nm; ++k) {
        const Vector v = eigenvector(grid, k);
        const double lam = eigenvalue_A(grid, k);
        worst = std::max(worst, norm_inf(axpy(-lam, v, a.apply(v))) / lam);
      }
      check.add("stiffness eigenpairs", n, worst, 1e-10);
    }

    {
      double prolong_res = 0.0, restrict_low = 0.0, restrict_high = 0.0, coarse_spec = 0.0,
             coarse_simplified = 0.0;
      const TridiagonalMatrix a2h = galerkin_coarse(a, p_op);
      for (std::size_t k = 1; k <= nc; ++k) {
        const std::size_t kc = complementary_mode(grid, k);
        const double s2 = mode_sin2(grid, k), c2v = mode_cos2(grid, k);
        const Vector vk = eigenvector(grid, k), vkc = eigenvector(grid, kc);
        const Vector vc = coarse_eigenvector(grid, k);

        const Vector lhs = opts.flip_prolongation_sign ? detail::prolong_flipped(p_op, vc)
                                                       : prolong(p_op, vc);
        const Vector rhs = axpy(-s2, vkc, scaled(c2v, vk));
        prolong_res = std::max(prolong_res, norm_inf(subtract(lhs, rhs)));

        restrict_low = std::max(
            restrict_low, norm_inf(subtract(restrict_to_coarse(r_op, vk), scaled(2.0 * c2v, vc))));
        restrict_high = std::max(
            restrict_high, norm_inf(subtract(restrict_to_coarse(r_op, vkc), scaled(-2.0 * s2, vc))));

        const double lam = 2.0 * eigenvalue_A(grid, k) * c2v * c2v +
                           2.0 * eigenvalue_A(grid, kc) * s2 * s2;
        coarse_spec = std::max(coarse_spec, norm_inf(axpy(-lam, vc, a2h.apply(vc))) / lam);
        coarse_simplified =
            std::max(coarse_simplified, std::abs(lam - coarse_eigenvalue(grid, k)) / lam);
      }
      check.add("prolongation of coarse modes", n, prolong_res, 1e-12);
      check.add("restriction of smooth modes", n, restrict_low, 1e-12);
      check.add("restriction of complementary modes", n, restrict_high, 1e-12);
      check.add("Galerkin coarse spectrum", n, coarse_spec, 1e-10);
      check.add("Galerkin spectrum simplified form", n, coarse_simplified, 1e-12);

      const TridiagonalMatrix redisc = assemble_stiffness(grid.coarsened());
      double worst = 0.0;
      for (std::size_t i = 0; i < nc; ++i) {
        worst = std::max(worst, std::abs(a2h.diag[i] - 2.0 * redisc.diag[i]) / std::abs(redisc.diag[i]));
        if (i + 1 < nc) {
          worst = std::max(worst, std::abs(a2h.sub[i] - 2.0 * redisc.sub[i]) / std::abs(redisc.sub[i]));
          worst = std::max(worst, std::abs(a2h.sup[i] - 2.0 * redisc.sup[i]) / std::abs(redisc.sup[i]));
        }
      }
      check.add("Galerkin equals twice rediscretized", n, worst, 1e-12);
    }

    {
      const Vector c = detail::random_vector(rng, nc);
      const Vector f = detail::random_vector(rng, nm);
      const double lhs = dot(prolong(p_op, c), f);
      const double rhs = dot(c, restrict_to_coarse(r_op, f));
      check.add("restriction is prolongation transpose", n,
                std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)), 1e-12);
    }

    {
      double worst = 0.0;
      const Vector zero(nm, 0.0);
      for (const auto& sched : schedules) {
        for (std::size_t k = 1; k <= nm; ++k) {
          const Vector v = eigenvector(grid, k);
          const Vector sv = apply_schedule(a, v, zero, sched);
          worst = std::max(worst, norm_inf(axpy(-smoother_eigenvalue(grid, k, sched), v, sv)) /
                                      norm_inf(v));
        }
      }
      check.add("smoother preserves sine modes", n, worst, 1e-12);
    }

    {
      double worst = 0.0;
      for (const auto& sched : schedules) {
        const DenseMatrix rtg = assemble_twogrid_matrix(grid, sched);
        for (std::size_t k = 1; k <= nm; ++k) {
          const Vector b = twogrid_eigenvector(grid, k, sched);
          const double lam = twogrid_eigenvalue(grid, k, sched);
          worst = std::max(worst, norm_inf(axpy(-lam, b, dense_matvec(rtg, b))) / norm_inf(b));
        }
      }
      check.add("two-grid eigenpairs vs assembled matrix", n, worst, 1e-10);
    }

    {
      double worst = 0.0;
      for (const auto& sched : schedules) {
        if (sched.size() != 2) continue;
        for (std::size_t k = 1; k <= grid.middle_mode(); ++k) {
          const double closed = twogrid_eigenvalue(grid, k, sched);
          worst = std::max(worst,
                           std::abs(closed - twogrid_eigenvalue_two_weights(grid, k, sched[0], sched[1])));
          worst = std::max(worst,
                           std::abs(closed - twogrid_eigenvalue_from_operator_spectra(grid, k, sched)));
        }
      }
      check.add("two-sweep expansion consistency", n, worst, 1e-13);
    }

    {
      double worst_c1 = 0.0;
      for (std::size_t k = 1; k <= grid.middle_mode(); ++k) {
        worst_c1 = std::max(worst_c1, std::abs(c1(grid, k) - 1.0));
      }
      check.add("low-branch coefficient equals one", n, worst_c1, 1e-13);
    }

    {
      // (1, 1/2) makes every two-grid eigenvalue vanish, but the eigenbasis is
      // defective, so R^TG is nilpotent of index two rather than zero.
      const WeightSchedule exact{1.0, 0.5};
      double worst_eig = 0.0;
      for (std::size_t k = 1; k <= nm; ++k) {
        worst_eig = std::max(worst_eig, std::abs(twogrid_eigenvalue(grid, k, exact)));
      }
      check.add("schedule (1, 1/2) two-grid eigenvalues vanish", n, worst_eig, 1e-13);

      const DenseMatrix rtg = assemble_twogrid_matrix(grid, exact);
      check.add("schedule (1, 1/2) two-grid matrix squares to zero", n,
                dense_matmul(rtg, rtg).max_abs_entry(), 1e-12);

      const auto hier = build_hierarchy(grid, 2);
      const Vector f = detail::random_vector(rng, nm);
      const Vector direct = thomas_solve(a, f);
      const TwoGridConfig cfg{exact};
      const Vector u2 = two_grid_cycle(hier, two_grid_cycle(hier, Vector(nm, 0.0), f, cfg), f, cfg);
      check.add("schedule (1, 1/2) two two-grid cycles are exact", n,
                norm_inf(subtract(u2, direct)) / norm_inf(direct), 1e-12);
    }

    {
      const auto radius = spectral_radius_closed_form(grid, {2.0 / 3.0});
      double dev = std::abs(radius.radius - 1.0 / 3.0);
      if (radius.argmax_k != grid.middle_mode()) dev = std::max(dev, 1.0);
      check.add("single sweep w = 2/3 radius 1/3", n, dev, 1e-12);

      double worst = 0.0;
      const WeightSchedule twice{2.0 / 3.0, 2.0 / 3.0};
      for (std::size_t k = 1; k <= grid.middle_mode(); ++k) {
        worst = std::max(worst, std::abs(twogrid_eigenvalue(grid, k, twice) - 1.0 / 9.0));
      }
      check.add("two sweeps w = 2/3 constant spectrum 1/9", n, worst, 1e-13);
    }
  }

  {
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) worst = std::max(worst, std::abs(lemma1_identity(dist(rng)) - 1.0));
    check.add("quartic/sextic identity", 0, worst, 1e-14);
  }
  return results;
}

}  // namespace exactmg
