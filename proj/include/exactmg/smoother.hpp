#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "exactmg/discretization.hpp"
#include "exactmg/linalg.hpp"

namespace exactmg {

/// Ordered Jacobi weights (w_1, ..., w_m), m >= 1. Any finite weight is
/// allowed; the smoother itself need not converge.
class WeightSchedule {
 public:
  explicit WeightSchedule(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw configuration_error("WeightSchedule: at least one weight required");
    if (!all_finite(weights_)) throw configuration_error("WeightSchedule: weights must be finite");
  }
  WeightSchedule(std::initializer_list<double> weights)
      : WeightSchedule(std::vector<double>(weights)) {}

  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

  friend bool operator==(const WeightSchedule&, const WeightSchedule&) = default;

 private:
  std::vector<double> weights_;
};

namespace detail {

inline void require_nonzero_diagonal(const TridiagonalMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.diag[i] == 0.0) {
      throw singular_matrix_error("weighted Jacobi: zero diagonal entry at row " +
                                  std::to_string(i));
    }
  }
}

}  // namespace detail

/// x + w D^{-1} (f - A x): one simultaneous weighted-Jacobi update.
inline Vector jacobi_sweep(const TridiagonalMatrix& a, std::span<const double> x,
                           std::span<const double> f, double omega) {
  detail::require_same_length(a.size(), x.size(), "jacobi_sweep");
  detail::require_same_length(a.size(), f.size(), "jacobi_sweep");
  detail::require_nonzero_diagonal(a);
  const Vector r = residual(a, x, f);
  Vector out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += omega * r[i] / a.diag[i];
  return out;
}

/// Sweeps with w_1 first, then w_2, and so on.
inline Vector apply_schedule(const TridiagonalMatrix& a, std::span<const double> x,
                             std::span<const double> f, const WeightSchedule& sched) {
  Vector out(x.begin(), x.end());
  for (double w : sched.weights()) out = jacobi_sweep(a, out, f, w);
  return out;
}

/// prod_i (1 - 2 w_i sin^2(k pi h / 2))
inline double smoother_eigenvalue(const Grid1D& grid, std::size_t k, const WeightSchedule& sched) {
  detail::require_mode(grid, k, "smoother_eigenvalue");
  const double s2 = mode_sin2(grid, k);
  double value = 1.0;
  for (double w : sched.weights()) value *= 1.0 - 2.0 * w * s2;
  return value;
}

/// I - w D^{-1} A
inline DenseMatrix jacobi_iteration_matrix(const TridiagonalMatrix& a, double omega) {
  detail::require_nonzero_diagonal(a);
  const std::size_t n = a.size();
  DenseMatrix m = DenseMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = omega / a.diag[i];
    m(i, i) -= scale * a.diag[i];
    if (i > 0) m(i, i - 1) -= scale * a.sub[i - 1];
    if (i + 1 < n) m(i, i + 1) -= scale * a.sup[i];
  }
  return m;
}

/// R^{w_1} R^{w_2} ... R^{w_m}. The factors are polynomials in D^{-1}A and commute,
/// so this is also the matrix of apply_schedule at f = 0.
inline DenseMatrix smoother_iteration_matrix(const TridiagonalMatrix& a,
                                             const WeightSchedule& sched) {
  DenseMatrix s = jacobi_iteration_matrix(a, sched[0]);
  for (std::size_t i = 1; i < sched.size(); ++i) {
    s = dense_matmul(s, jacobi_iteration_matrix(a, sched[i]));
  }
  return s;
}

/// 3 (sin^4 x + cos^4 x) - 2 (sin^6 x + cos^6 x); identically one.
inline double lemma1_identity(double x) {
  const double s2 = std::sin(x) * std::sin(x);
  const double c2 = std::cos(x) * std::cos(x);
  return 3.0 * (s2 * s2 + c2 * c2) - 2.0 * (s2 * s2 * s2 + c2 * c2 * c2);
}

}  // namespace exactmg
