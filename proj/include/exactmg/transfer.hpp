#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>

#include "exactmg/discretization.hpp"
#include "exactmg/linalg.hpp"

namespace exactmg {

class Restriction;

/// Linear interpolation from coarse_dim coarse unknowns to 2*coarse_dim + 1
/// fine unknowns. Coarse unknown i sits on fine unknown 2i + 1 (0-based).
class Prolongation {
 public:
  explicit Prolongation(std::size_t coarse_dim) : coarse_dim_(coarse_dim) {
    if (coarse_dim == 0) throw dimension_error("Prolongation: coarse dimension must be >= 1");
  }

  static Prolongation for_fine(std::size_t fine_dim) {
    if (fine_dim < 3 || fine_dim % 2 == 0) {
      throw dimension_error("Prolongation: fine dimension must be odd and >= 3, got " +
                            std::to_string(fine_dim));
    }
    return Prolongation((fine_dim - 1) / 2);
  }

  static Prolongation for_grid(const Grid1D& grid) { return for_fine(grid.unknowns()); }

  std::size_t fine_dim() const { return 2 * coarse_dim_ + 1; }
  std::size_t coarse_dim() const { return coarse_dim_; }

  Restriction transpose() const;

  /// Columns are 1/2 [1 2 1]^T, shifted by two rows per column.
  DenseMatrix to_dense() const {
    DenseMatrix p(fine_dim(), coarse_dim_);
    for (std::size_t i = 0; i < coarse_dim_; ++i) {
      p(2 * i, i) = 0.5;
      p(2 * i + 1, i) = 1.0;
      p(2 * i + 2, i) = 0.5;
    }
    return p;
  }

  friend bool operator==(const Prolongation&, const Prolongation&) = default;

 private:
  std::size_t coarse_dim_;
};

/// Full weighting, the exact transpose of Prolongation.
class Restriction {
 public:
  explicit Restriction(std::size_t coarse_dim) : coarse_dim_(coarse_dim) {
    if (coarse_dim == 0) throw dimension_error("Restriction: coarse dimension must be >= 1");
  }

  std::size_t fine_dim() const { return 2 * coarse_dim_ + 1; }
  std::size_t coarse_dim() const { return coarse_dim_; }

  Prolongation transpose() const { return Prolongation(coarse_dim_); }
  DenseMatrix to_dense() const { return exactmg::transpose(transpose().to_dense()); }

  friend bool operator==(const Restriction&, const Restriction&) = default;

 private:
  std::size_t coarse_dim_;
};

inline Restriction Prolongation::transpose() const { return Restriction(coarse_dim_); }

inline Vector prolong(const Prolongation& op, std::span<const double> coarse) {
  detail::require_same_length(op.coarse_dim(), coarse.size(), "prolong");
  const std::size_t nc = op.coarse_dim();
  Vector fine(op.fine_dim());
  for (std::size_t i = 0; i < nc; ++i) fine[2 * i + 1] = coarse[i];
  // Even fine points lie between coarse points; boundary neighbours are zero.
  fine[0] = 0.5 * coarse[0];
  for (std::size_t i = 1; i < nc; ++i) fine[2 * i] = 0.5 * (coarse[i - 1] + coarse[i]);
  fine[2 * nc] = 0.5 * coarse[nc - 1];
  return fine;
}

inline Vector restrict_to_coarse(const Restriction& op, std::span<const double> fine) {
  detail::require_same_length(op.fine_dim(), fine.size(), "restrict_to_coarse");
  Vector coarse(op.coarse_dim());
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    coarse[i] = 0.5 * fine[2 * i] + fine[2 * i + 1] + 0.5 * fine[2 * i + 2];
  }
  return coarse;
}

/// Coarse sine mode v_k^{2h}: entries sin(2 j k pi / (n - 1)), j = 1..(n-3)/2.
inline Vector coarse_eigenvector(const Grid1D& grid, std::size_t k) {
  const std::size_t nc = grid.coarse_unknowns();
  if (k < 1 || k > nc) {
    throw index_error("coarse_eigenvector: mode " + std::to_string(k) + " outside 1.." +
                      std::to_string(nc));
  }
  const double m = static_cast<double>(grid.intervals());
  Vector v(nc);
  for (std::size_t j = 1; j <= nc; ++j) {
    v[j - 1] = std::sin(2.0 * static_cast<double>(j * k) * std::numbers::pi / m);
  }
  return v;
}

/// Galerkin product R A P computed from the local stencils, O(N).
inline TridiagonalMatrix galerkin_coarse(const TridiagonalMatrix& a_fine, const Prolongation& op) {
  detail::require_same_length(a_fine.size(), op.fine_dim(), "galerkin_coarse");
  const std::size_t nf = op.fine_dim();
  const std::size_t nc = op.coarse_dim();

  Vector sub(nc - 1, 0.0), diag(nc, 0.0), sup(nc - 1, 0.0);

  // Column i of P is supported on fine rows 2i, 2i+1, 2i+2 with weights 1/2, 1, 1/2.
  constexpr std::array<double, 3> kStencil{0.5, 1.0, 0.5};
  for (std::size_t i = 0; i < nc; ++i) {
    const std::size_t first = 2 * i;
    auto p_entry = [&](std::size_t r) -> double {
      return (r >= first && r <= first + 2) ? kStencil[r - first] : 0.0;
    };

    // (A P e_i) is supported on fine rows 2i-1 .. 2i+3.
    std::array<double, 5> ap{};
    for (std::size_t q = 0; q < 5; ++q) {
      if (first + q < 1 || first + q - 1 >= nf) continue;
      const std::size_t r = first + q - 1;
      double s = a_fine.diag[r] * p_entry(r);
      if (r > 0) s += a_fine.sub[r - 1] * p_entry(r - 1);
      if (r + 1 < nf) s += a_fine.sup[r] * p_entry(r + 1);
      ap[q] = s;
    }
    auto ap_at = [&](std::size_t r) -> double {
      return (r + 1 >= first && r + 1 <= first + 4) ? ap[r + 1 - first] : 0.0;
    };

    // Row l of R weights fine rows 2l, 2l+1, 2l+2.
    for (std::size_t l = (i == 0 ? 0 : i - 1); l <= std::min(i + 1, nc - 1); ++l) {
      const double value = 0.5 * ap_at(2 * l) + ap_at(2 * l + 1) + 0.5 * ap_at(2 * l + 2);
      if (l == i) {
        diag[i] = value;
      } else if (l + 1 == i) {
        sup[l] = value;  // entry (l, l+1)
      } else {
        sub[i] = value;  // entry (i+1, i)
      }
    }
  }
  return {std::move(sub), std::move(diag), std::move(sup)};
}

}  // namespace exactmg
