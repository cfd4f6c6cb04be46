#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace exactmg {

using Vector = std::vector<double>;

class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class singular_matrix_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class index_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class configuration_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw dimension_error(std::string(what) + ": length " + std::to_string(a) +
                          " does not match " + std::to_string(b));
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Vector helpers
// ---------------------------------------------------------------------------

inline double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  detail::require_same_length(x.size(), y.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

/// x - y
inline Vector subtract(std::span<const double> x, std::span<const double> y) {
  detail::require_same_length(x.size(), y.size(), "subtract");
  Vector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

/// a*x + y
inline Vector axpy(double a, std::span<const double> x, std::span<const double> y) {
  detail::require_same_length(x.size(), y.size(), "axpy");
  Vector r(y.begin(), y.end());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] += a * x[i];
  return r;
}

inline Vector scaled(double a, std::span<const double> x) {
  Vector r(x.begin(), x.end());
  for (double& v : r) v *= a;
  return r;
}

inline bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------------------
// DenseMatrix
// ---------------------------------------------------------------------------

/// Row-major dense matrix. Only verification paths assemble these.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
      : rows_(rows), cols_(cols), entries_(std::move(row_major)) {
    if (entries_.size() != rows_ * cols_) {
      throw dimension_error("DenseMatrix: entry count does not match rows*cols");
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::span<const double> entries() const { return entries_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(entries_).subspan(r * cols_, cols_);
  }

  Vector column(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  double max_abs_entry() const { return exactmg::norm_inf(entries_); }

  /// Maximum absolute row sum.
  double norm_inf() const {
    double m = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      double s = 0.0;
      for (double v : row(r)) s += std::abs(v);
      m = std::max(m, s);
    }
    return m;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

inline Vector dense_matvec(const DenseMatrix& m, std::span<const double> x) {
  detail::require_same_length(m.cols(), x.size(), "dense_matvec");
  Vector y(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) s += row[c] * x[c];
    y[r] = s;
  }
  return y;
}

inline DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw dimension_error("dense_matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                          std::to_string(b.rows()) + " differ");
  }
  DenseMatrix c(a.rows(), b.cols());
  // i-k-j order keeps the inner loop contiguous in both b and c.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

inline DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
  return t;
}

inline DenseMatrix dense_subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw dimension_error("dense_subtract: shape mismatch");
  }
  DenseMatrix c(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t col = 0; col < a.cols(); ++col) c(r, col) = a(r, col) - b(r, col);
  return c;
}

// ---------------------------------------------------------------------------
// TridiagonalMatrix
// ---------------------------------------------------------------------------

/// N x N tridiagonal matrix; sub[i] = A(i+1, i), sup[i] = A(i, i+1).
struct TridiagonalMatrix {
  Vector sub;
  Vector diag;
  Vector sup;

  TridiagonalMatrix() = default;
  TridiagonalMatrix(Vector sub_, Vector diag_, Vector sup_)
      : sub(std::move(sub_)), diag(std::move(diag_)), sup(std::move(sup_)) {
    if (diag.empty()) throw dimension_error("TridiagonalMatrix: empty diagonal");
    if (sub.size() + 1 != diag.size() || sup.size() + 1 != diag.size()) {
      throw dimension_error("TridiagonalMatrix: off-diagonals must have length N-1");
    }
  }

  static TridiagonalMatrix constant(std::size_t n, double lower, double center, double upper) {
    if (n == 0) throw dimension_error("TridiagonalMatrix: empty diagonal");
    return {Vector(n - 1, lower), Vector(n, center), Vector(n - 1, upper)};
  }

  std::size_t size() const { return diag.size(); }

  bool symmetric() const { return sub == sup; }

  /// Entry (r, c); zero outside the band.
  double at(std::size_t r, std::size_t c) const {
    if (r == c) return diag[r];
    if (r == c + 1) return sub[c];
    if (c == r + 1) return sup[r];
    return 0.0;
  }

  Vector apply(std::span<const double> x) const {
    detail::require_same_length(size(), x.size(), "TridiagonalMatrix::apply");
    const std::size_t n = size();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = diag[i] * x[i];
      if (i > 0) s += sub[i - 1] * x[i - 1];
      if (i + 1 < n) s += sup[i] * x[i + 1];
      y[i] = s;
    }
    return y;
  }

  DenseMatrix to_dense() const {
    const std::size_t n = size();
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = diag[i];
      if (i + 1 < n) {
        m(i, i + 1) = sup[i];
        m(i + 1, i) = sub[i];
      }
    }
    return m;
  }

  friend bool operator==(const TridiagonalMatrix&, const TridiagonalMatrix&) = default;
};

/// b - A x
inline Vector residual(const TridiagonalMatrix& a, std::span<const double> x,
                       std::span<const double> b) {
  detail::require_same_length(a.size(), b.size(), "residual");
  return subtract(b, a.apply(x));
}

/// Thomas algorithm without pivoting. Throws singular_matrix_error on a zero pivot.
inline Vector thomas_solve(const TridiagonalMatrix& a, std::span<const double> b) {
  const std::size_t n = a.size();
  detail::require_same_length(n, b.size(), "thomas_solve");

  Vector c_prime(n, 0.0);
  Vector x(n, 0.0);

  double pivot = a.diag[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) {
    throw singular_matrix_error("thomas_solve: zero pivot in row 0");
  }
  if (n > 1) c_prime[0] = a.sup[0] / pivot;
  x[0] = b[0] / pivot;

  for (std::size_t i = 1; i < n; ++i) {
    pivot = a.diag[i] - a.sub[i - 1] * c_prime[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw singular_matrix_error("thomas_solve: zero pivot in row " + std::to_string(i));
    }
    if (i + 1 < n) c_prime[i] = a.sup[i] / pivot;
    x[i] = (b[i] - a.sub[i - 1] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_prime[i] * x[i + 1];
  return x;
}

/// Dense inverse assembled column by column from tridiagonal solves.
inline DenseMatrix tridiagonal_inverse(const TridiagonalMatrix& a) {
  const std::size_t n = a.size();
  DenseMatrix inv(n, n);
  Vector unit(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    unit[c] = 1.0;
    const Vector col = thomas_solve(a, unit);
    unit[c] = 0.0;
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Power iteration
// ---------------------------------------------------------------------------

struct PowerIterationResult {
  double radius_estimate = 0.0;
  int iterations_used = 0;
  bool converged = false;
  /// The iterate fell to (numerically) zero; radius_estimate is reported as 0.
  bool collapsed = false;
};

/// Deterministic seed: all ones plus an index-dependent ramp, so that modes
/// antisymmetric about the midpoint are also excited.
inline Vector default_power_seed(std::size_t n) {
  Vector seed(n);
  for (std::size_t j = 0; j < n; ++j) {
    seed[j] = 1.0 + 0.25 * static_cast<double>(j + 1) / static_cast<double>(n);
  }
  return seed;
}

/// Estimates the spectral radius from ||M x_k||_2 / ||x_k||_2. Converged once
/// successive estimates differ by less than tol.
inline PowerIterationResult power_iteration(const DenseMatrix& m, std::span<const double> seed,
                                            int max_iters, double tol,
                                            double collapse_threshold = 1e-13) {
  if (!m.square()) throw dimension_error("power_iteration: matrix is not square");
  detail::require_same_length(m.cols(), seed.size(), "power_iteration");
  if (!(tol > 0.0)) throw std::invalid_argument("power_iteration: tol must be positive");

  const double seed_norm = norm2(seed);
  if (seed_norm == 0.0) throw std::invalid_argument("power_iteration: seed is zero");

  Vector x = scaled(1.0 / seed_norm, seed);
  PowerIterationResult out;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iters; ++it) {
    Vector y = dense_matvec(m, x);
    const double estimate = norm2(y);
    out.iterations_used = it;
    if (estimate <= collapse_threshold) {
      out.radius_estimate = 0.0;
      out.collapsed = true;
      out.converged = true;
      return out;
    }
    out.radius_estimate = estimate;
    if (std::abs(estimate - previous) < tol) {
      out.converged = true;
      return out;
    }
    previous = estimate;
    x = scaled(1.0 / estimate, y);
  }
  return out;
}

}  // namespace exactmg
