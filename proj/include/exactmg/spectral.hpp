#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "exactmg/cycles.hpp"
#include "exactmg/discretization.hpp"
#include "exactmg/linalg.hpp"
#include "exactmg/smoother.hpp"
#include "exactmg/transfer.hpp"

namespace exactmg {

/// The two-grid eigenbasis is not a basis for this schedule: mode `mode()`
/// couples to its complement through a zero smoother eigenvalue or a repeated
/// eigenvector.
class defective_basis_error : public std::runtime_error {
 public:
  defective_basis_error(std::size_t mode, const std::string& what)
      : std::runtime_error(what), mode_(mode) {}
  std::size_t mode() const { return mode_; }

 private:
  std::size_t mode_;
};

enum class Branch { low, high };

inline const char* to_string(Branch b) { return b == Branch::low ? "low" : "high"; }

/// Low branch: 1 <= k <= (n-1)/2. High branch: (n-1)/2 < k <= n-2.
inline Branch branch_of(const Grid1D& grid, std::size_t k) {
  detail::require_mode(grid, k, "branch_of");
  return k <= grid.middle_mode() ? Branch::low : Branch::high;
}

// ---------------------------------------------------------------------------
// Closed-form two-grid spectrum
// ---------------------------------------------------------------------------

/// Low-branch eigenvector coefficient cos^2 lambda_k(A) / (sin^2 lambda_{n-1-k}(A)).
/// Equals one for the Poisson stiffness matrix.
inline double c1(const Grid1D& grid, std::size_t k) {
  if (k < 1 || k > grid.middle_mode()) {
    throw index_error("c1: mode " + std::to_string(k) + " outside 1.." +
                      std::to_string(grid.middle_mode()));
  }
  const std::size_t kc = complementary_mode(grid, k);
  return mode_cos2(grid, k) * eigenvalue_A(grid, k) /
         (mode_sin2(grid, k) * eigenvalue_A(grid, kc));
}

namespace detail {

/// Magnitude bound on a smoother eigenvalue, used to scale degeneracy checks.
inline double smoother_scale(const WeightSchedule& sched) {
  double s = 1.0;
  for (double w : sched.weights()) s *= 1.0 + 2.0 * std::abs(w);
  return s;
}

}  // namespace detail

/// -sin^2 lambda_k(S) / (cos^2 lambda_{n-1-k}(S)); the zero-eigenvalue coefficient.
/// Throws defective_basis_error when the schedule annihilates mode n-1-k.
inline double c2(const Grid1D& grid, std::size_t k, const WeightSchedule& sched) {
  detail::require_mode(grid, k, "c2");
  const std::size_t kc = complementary_mode(grid, k);
  const double denom_smoother = smoother_eigenvalue(grid, kc, sched);
  if (std::abs(denom_smoother) <= 64.0 * std::numeric_limits<double>::epsilon() *
                                      detail::smoother_scale(sched)) {
    throw defective_basis_error(k, "c2: schedule annihilates mode " + std::to_string(kc) +
                                       ", paired with mode " + std::to_string(k));
  }
  return -mode_sin2(grid, k) * smoother_eigenvalue(grid, k, sched) /
         (mode_cos2(grid, k) * denom_smoother);
}

/// lambda_k(S) sin^2 + lambda_{n-1-k}(S) cos^2 on the low branch, zero on the high branch.
inline double twogrid_eigenvalue(const Grid1D& grid, std::size_t k, const WeightSchedule& sched) {
  if (branch_of(grid, k) == Branch::high) return 0.0;
  const std::size_t kc = complementary_mode(grid, k);
  return smoother_eigenvalue(grid, k, sched) * mode_sin2(grid, k) +
         smoother_eigenvalue(grid, kc, sched) * mode_cos2(grid, k);
}

/// Same eigenvalue written through the fine and Galerkin coarse spectra,
///   (2 s^4 lambda_{n-1-k}(A) lambda_k(S) + 2 c^4 lambda_k(A) lambda_{n-1-k}(S)) / lambda_k(A^{2h}),
/// with lambda_k(A^{2h}) = 2 lambda_k(A) c^4 + 2 lambda_{n-1-k}(A) s^4.
/// Does not use the Poisson-specific simplification c1 = 1.
inline double twogrid_eigenvalue_from_operator_spectra(const Grid1D& grid, std::size_t k,
                                                       const WeightSchedule& sched) {
  if (branch_of(grid, k) == Branch::high) return 0.0;
  const std::size_t kc = complementary_mode(grid, k);
  const double s2 = mode_sin2(grid, k);
  const double c2v = mode_cos2(grid, k);
  const double lam_a = eigenvalue_A(grid, k);
  const double lam_ac = eigenvalue_A(grid, kc);
  const double coarse = 2.0 * lam_a * c2v * c2v + 2.0 * lam_ac * s2 * s2;
  return (2.0 * s2 * s2 * lam_ac * smoother_eigenvalue(grid, k, sched) +
          2.0 * c2v * c2v * lam_a * smoother_eigenvalue(grid, kc, sched)) /
         coarse;
}

/// Expansion for two sweeps:
///   1 - 2(w1 + w2)(sin^4 + cos^4) + 4 w1 w2 (sin^6 + cos^6).
inline double twogrid_eigenvalue_two_weights(const Grid1D& grid, std::size_t k, double w1,
                                             double w2) {
  if (branch_of(grid, k) == Branch::high) return 0.0;
  const double s2 = mode_sin2(grid, k);
  const double c2v = mode_cos2(grid, k);
  const double quartic = s2 * s2 + c2v * c2v;
  const double sextic = s2 * s2 * s2 + c2v * c2v * c2v;
  return 1.0 - 2.0 * (w1 + w2) * quartic + 4.0 * w1 * w2 * sextic;
}

/// Galerkin coarse eigenvalue in simplified form, (2/h^2) sin^2(k pi h).
inline double coarse_eigenvalue(const Grid1D& grid, std::size_t k) {
  const double s = std::sin(static_cast<double>(k) * std::numbers::pi /
                            static_cast<double>(grid.intervals()));
  return 2.0 * grid.inv_spacing_squared() * s * s;
}

/// b_k = v_k + v_{n-1-k} on the low branch (c1 = 1), v_k + c2 v_{n-1-k} on the high branch.
inline Vector twogrid_eigenvector(const Grid1D& grid, std::size_t k, const WeightSchedule& sched) {
  const std::size_t kc = complementary_mode(grid, k);
  const double coeff = branch_of(grid, k) == Branch::low ? 1.0 : c2(grid, k, sched);
  return axpy(coeff, eigenvector(grid, kc), eigenvector(grid, k));
}

// ---------------------------------------------------------------------------
// Assembled two-grid matrix
// ---------------------------------------------------------------------------

/// I - P (A^{2h})^{-1} R A^h
inline DenseMatrix coarse_grid_correction_matrix(const Grid1D& grid) {
  const TridiagonalMatrix a = assemble_stiffness(grid);
  const auto p_op = Prolongation::for_grid(grid);
  const DenseMatrix p = p_op.to_dense();
  const DenseMatrix r = transpose(p);
  const DenseMatrix coarse_inv = tridiagonal_inverse(galerkin_coarse(a, p_op));
  const DenseMatrix correction =
      dense_matmul(p, dense_matmul(coarse_inv, dense_matmul(r, a.to_dense())));
  return dense_subtract(DenseMatrix::identity(a.size()), correction);
}

/// (I - P (A^{2h})^{-1} R A^h) S
inline DenseMatrix assemble_twogrid_matrix(const Grid1D& grid, const WeightSchedule& sched) {
  const TridiagonalMatrix a = assemble_stiffness(grid);
  return dense_matmul(coarse_grid_correction_matrix(grid), smoother_iteration_matrix(a, sched));
}

struct RadiusResult {
  double radius = 0.0;
  std::size_t argmax_k = 1;
};

/// max_k |lambda_k(R^TG)|, smallest k on ties.
inline RadiusResult spectral_radius_closed_form(const Grid1D& grid, const WeightSchedule& sched) {
  RadiusResult out{-1.0, 1};
  for (std::size_t k = 1; k <= grid.unknowns(); ++k) {
    const double v = std::abs(twogrid_eigenvalue(grid, k, sched));
    if (v > out.radius) out = {v, k};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single-weight optimisation
// ---------------------------------------------------------------------------

/// Weight w solving 1 - 2 w a = -(1 - 2 w b), i.e. equal magnitude and opposite
/// sign of the one-sweep eigenvalue at the two ends of the spectrum, where a and b
/// are the values of sin^4 + cos^4 there.
inline double equioscillation_weight(double smooth_end, double oscillatory_end) {
  return 1.0 / (smooth_end + oscillatory_end);
}

/// Taking sin^4 + cos^4 as 1 at k = 1 (its limit as h -> 0) and 1/2 at k = (n-1)/2.
inline double optimal_single_weight() { return equioscillation_weight(1.0, 0.5); }

struct WeightSweepResult {
  double omega = 0.0;
  double radius = std::numeric_limits<double>::infinity();
};

/// Brute-force minimiser of the closed-form radius over w = step, 2 step, ..., <= upper.
inline WeightSweepResult sweep_single_weight(const Grid1D& grid, double step, double upper) {
  WeightSweepResult best;
  const auto count = static_cast<long>(std::floor(upper / step + 1e-9));
  for (long i = 1; i <= count; ++i) {
    const double w = static_cast<double>(i) * step;
    const double r = spectral_radius_closed_form(grid, WeightSchedule{w}).radius;
    if (r < best.radius) best = {w, r};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Spectrum report
// ---------------------------------------------------------------------------

struct TwoGridEigenpair {
  std::size_t k = 0;
  double eigenvalue = 0.0;
  /// c1 on the low branch, c2 on the high branch; NaN when the pair is defective.
  double c_coefficient = 0.0;
  Branch branch = Branch::low;
  /// ||R^TG b - lambda b||_inf / ||b||_inf against the assembled matrix.
  double residual = 0.0;
  bool defective = false;
};

struct SpectrumReport {
  std::size_t n = 0;
  WeightSchedule schedule;
  std::vector<TwoGridEigenpair> pairs;
  double spectral_radius = 0.0;
  std::size_t spectral_radius_mode = 1;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool verified = false;
  PowerIterationResult power_iteration;
  /// max |entry| of the assembled R^TG and of its square. A zero spectral radius
  /// with a nonzero matrix means R^TG is nilpotent, not zero.
  double matrix_max_abs_entry = 0.0;
  double matrix_squared_max_abs_entry = 0.0;
  /// Number of high-branch pairs whose eigenvector is missing or coincides with its partner.
  std::size_t defective_pairs = 0;
};

inline SpectrumReport build_spectrum_report(const Grid1D& grid, const WeightSchedule& sched,
                                            double tolerance = 1e-10) {
  const DenseMatrix rtg = assemble_twogrid_matrix(grid, sched);
  SpectrumReport rep{grid.points(), sched, {}, 0.0, 1, 0.0, tolerance, false, {}, 0.0, 0.0, 0};

  for (std::size_t k = 1; k <= grid.unknowns(); ++k) {
    TwoGridEigenpair pair;
    pair.k = k;
    pair.branch = branch_of(grid, k);
    pair.eigenvalue = twogrid_eigenvalue(grid, k, sched);
    Vector b;
    if (pair.branch == Branch::low) {
      pair.c_coefficient = c1(grid, k);
      b = twogrid_eigenvector(grid, k, sched);
    } else {
      try {
        pair.c_coefficient = c2(grid, k, sched);
        b = twogrid_eigenvector(grid, k, sched);
        // b_k = v_k + c2 v_kc is parallel to the partner's v_kc + v_k when c2 = 1.
        pair.defective = std::abs(1.0 - pair.c_coefficient) <= 1e-12 * (1.0 + std::abs(pair.c_coefficient));
      } catch (const defective_basis_error&) {
        // The annihilated complementary mode is itself a null vector of R^TG.
        pair.defective = true;
        pair.c_coefficient = std::numeric_limits<double>::quiet_NaN();
        b = eigenvector(grid, complementary_mode(grid, k));
      }
    }
    pair.residual = norm_inf(axpy(-pair.eigenvalue, b, dense_matvec(rtg, b))) / norm_inf(b);
    rep.max_residual = std::max(rep.max_residual, pair.residual);
    if (pair.defective) ++rep.defective_pairs;
    rep.pairs.push_back(pair);
  }

  const auto radius = spectral_radius_closed_form(grid, sched);
  rep.spectral_radius = radius.radius;
  rep.spectral_radius_mode = radius.argmax_k;
  rep.verified = rep.max_residual <= tolerance;
  rep.matrix_max_abs_entry = rtg.max_abs_entry();
  rep.matrix_squared_max_abs_entry = dense_matmul(rtg, rtg).max_abs_entry();
  rep.power_iteration = power_iteration(rtg, default_power_seed(grid.unknowns()), 200000, 1e-13);
  return rep;
}

// ---------------------------------------------------------------------------
// Error-mode decomposition
// ---------------------------------------------------------------------------

/// e = sum_k d_k b_k over all modes k = 1..n-2; entries are indexed by k - 1.
///
/// On each pair span{v_k, v_kc} the two-grid operator is rank one, R = b_k l^T with
/// l(v_k) = sin^2 lambda_k(S) and l(v_kc) = cos^2 lambda_kc(S). The high-branch slot is
///   v_kc + c2 v_k  when c2 is finite and != 1 (ordinary eigenvector, eigenvalue 0),
///   v_kc           when the schedule annihilates v_kc (c2 infinite, still eigenvalue 0),
///   v_kc           when c2 = 1, i.e. b_kc would coincide with b_k. Then l(b_k) = 0 and
///                  v_kc is a generalized eigenvector: R v_kc = jordan * b_k.
/// In the last case predict_error adds the chain term, which only matters at m = 1.
/// defective_basis_error is never raised: every pair has a spanning choice.
struct ErrorModeDecomposition {
  Grid1D grid;
  WeightSchedule schedule;
  Vector coefficients;
  Vector eigenvalues;
  /// Coefficient of v_{n-1-k} in the basis vector for slot k (v_kc coefficient is 1 on
  /// the high branch, so this is 1 on the low branch and c2 or 0 on the high branch).
  Vector c_coefficients;
  /// Per high-branch slot: R v_kc = jordan * b_k when the pair is defective, else 0.
  Vector jordan;
  std::vector<std::size_t> defective_modes;

  double coefficient(std::size_t k) const { return coefficients.at(k - 1); }
};

/// Only modes k and n-1-k couple, so the transform splits into independent 2x2
/// solves, plus the self-paired middle mode where b = 2 v.
inline ErrorModeDecomposition decompose_error(const Grid1D& grid, const WeightSchedule& sched,
                                              std::span<const double> e) {
  detail::require_same_length(grid.unknowns(), e.size(), "decompose_error");
  const std::size_t nm = grid.unknowns();
  const std::size_t mid = grid.middle_mode();

  ErrorModeDecomposition dec{grid,           sched,          Vector(nm, 0.0), Vector(nm, 0.0),
                             Vector(nm, 1.0), Vector(nm, 0.0), {}};
  for (std::size_t k = 1; k <= nm; ++k) dec.eigenvalues[k - 1] = twogrid_eigenvalue(grid, k, sched);

  auto sine_coefficient = [&](std::size_t k) {
    const Vector v = eigenvector(grid, k);
    return dot(e, v) / dot(v, v);
  };

  for (std::size_t k = 1; k < mid; ++k) {
    const std::size_t kc = complementary_mode(grid, k);
    const double a_low = sine_coefficient(k);
    const double a_high = sine_coefficient(kc);
    // Slot kc holds c v_k + v_kc; slot k holds b_k = v_k + v_kc.
    double c = 0.0;
    try {
      c = c2(grid, kc, sched);
    } catch (const defective_basis_error&) {
      c = 0.0;  // v_kc itself is annihilated by the smoother
    }
    if (std::abs(1.0 - c) <= 1e-12 * (1.0 + std::abs(c))) {
      c = 0.0;
      dec.jordan[kc - 1] = mode_cos2(grid, k) * smoother_eigenvalue(grid, kc, sched);
      dec.defective_modes.push_back(kc);
    }
    const double det = 1.0 - c;
    dec.coefficients[k - 1] = (a_low - c * a_high) / det;
    dec.coefficients[kc - 1] = (a_high - a_low) / det;
    dec.c_coefficients[kc - 1] = c;
  }
  dec.coefficients[mid - 1] = 0.5 * sine_coefficient(mid);
  return dec;
}

/// sum_k d_k lambda_k^m b_k, plus the Jordan-chain term for defective pairs.
/// m = 0 reconstructs the decomposed error.
inline Vector predict_error(const ErrorModeDecomposition& dec, int m) {
  if (m < 0) throw std::invalid_argument("predict_error: m must be non-negative");
  const Grid1D& grid = dec.grid;
  const std::size_t mid = grid.middle_mode();
  Vector out(grid.unknowns(), 0.0);
  auto add = [&](double weight, std::size_t k, double c) {
    if (weight == 0.0) return;
    const Vector vk = eigenvector(grid, k);
    const Vector vkc = eigenvector(grid, complementary_mode(grid, k));
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += weight * (vk[j] + c * vkc[j]);
  };
  for (std::size_t k = 1; k <= grid.unknowns(); ++k) {
    const double d = dec.coefficients[k - 1];
    add(d * std::pow(dec.eigenvalues[k - 1], m), k, dec.c_coefficients[k - 1]);
    const double alpha = dec.jordan[k - 1];
    if (alpha != 0.0 && m >= 1 && k > mid) {
      // Rank one on the pair: R^m v_kc = alpha lambda_low^{m-1} b_low, and lambda_low = 0
      // here, so only m = 1 contributes.
      const std::size_t low = complementary_mode(grid, k);
      add(d * alpha * std::pow(dec.eigenvalues[low - 1], m - 1), low, 1.0);
    }
  }
  return out;
}

}  // namespace exactmg
