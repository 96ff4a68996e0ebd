#pragma once

// Dense symmetric linear algebra for element-sized problems (n up to ~100):
// cyclic Jacobi eigensolver, Cholesky, spectral pseudo-inverse and the
// largest eigenpair of a semidefinite pencil B x = lambda M x restricted to
// range(M). Storage is dense row-major throughout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbs/error.hpp"

namespace cbs {

/// Relative eigenvalue threshold separating a kernel from the rest of the spectrum.
inline constexpr double kRankTol = 1e-10;

/// General dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw DimensionError("Matrix: entry count does not match shape");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius() const noexcept {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  /// Max absolute row sum.
  double inf_norm() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
      m = std::max(m, s);
    }
    return m;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("Matrix product: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("Matrix difference: shapes differ");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

inline std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw DimensionError("Matrix-vector product: size mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

/// Symmetric matrix. Input is symmetrized on ingest; an asymmetry larger than
/// 1e-8 * max|a_ij| is rejected.
class SymMatrix {
 public:
  static constexpr double kAsymmetryTol = 1e-8;

  explicit SymMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DimensionError("SymMatrix: matrix is not square");
    if (m_.rows() == 0) throw DimensionError("SymMatrix: dimension must be >= 1");
    const double scale = m_.max_abs();
    for (double v : m_.data())
      if (!std::isfinite(v)) throw DomainError("SymMatrix: non-finite entry");
    const std::size_t n = m_.rows();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = std::abs(m_(i, j) - m_(j, i));
        if (d > kAsymmetryTol * scale)
          throw DomainError("SymMatrix: entries (" + std::to_string(i) + "," + std::to_string(j) +
                            ") asymmetric beyond tolerance");
        const double avg = 0.5 * (m_(i, j) + m_(j, i));
        m_(i, j) = m_(j, i) = avg;
      }
  }
  SymMatrix(std::size_t n, std::vector<double> row_major) : SymMatrix(Matrix(n, n, std::move(row_major))) {}

  static SymMatrix identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }
  static SymMatrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return SymMatrix(std::move(m));
  }

  std::size_t size() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

  double quad(std::span<const double> x, std::span<const double> y) const {
    return dot(x, m_ * y);
  }

  /// Principal or off-diagonal block selected by row and column index sets.
  Matrix block(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const {
    Matrix b(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) b(i, j) = m_(rows[i], cols[j]);
    return b;
  }

 private:
  Matrix m_;
};

/// Q^T A Q for symmetric A.
inline SymMatrix congruence(const SymMatrix& a, const Matrix& q) {
  return SymMatrix(q.transposed() * a.matrix() * q);
}

struct EigenDecomposition {
  std::vector<double> values;  ///< ascending
  Matrix vectors;              ///< column k pairs with values[k]
  int sweeps = 0;
};

/// Full eigendecomposition by cyclic Jacobi rotations. Converged when the
/// off-diagonal Frobenius norm drops to 1e-14 |A|_F; at most 50 sweeps.
inline EigenDecomposition eigen_sym(const SymMatrix& sym, int max_sweeps = 50) {
  const std::size_t n = sym.size();
  Matrix a = sym.matrix();
  Matrix v = Matrix::identity(n);
  const double target = 1e-14 * a.frobenius();

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  double off = off_norm();
  while (off > target) {
    if (sweep == max_sweeps)
      throw ConvergenceError("eigen_sym: no convergence after " + std::to_string(max_sweeps) +
                             " sweeps, off-diagonal norm " + std::to_string(off));
    ++sweep;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    off = off_norm();
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  EigenDecomposition out{std::vector<double>(n), Matrix(n, n), sweep};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Lower Cholesky factor of A, or nullopt when a pivot falls to
/// shift_tol * max diagonal or below (singular to working accuracy).
/// Throws DefinitenessError for a pivot below -shift_tol * max diagonal.
inline std::optional<Matrix> cholesky_spd(const SymMatrix& sym, double shift_tol = 1e-12) {
  const std::size_t n = sym.size();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(sym(i, i)));
  const double floor = shift_tol * max_diag;
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = sym(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d < -floor)
      throw DefinitenessError("cholesky_spd: matrix is indefinite (pivot " + std::to_string(j) + ")");
    if (d <= floor) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = sym(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

struct PseudoInverse {
  SymMatrix inverse;
  std::size_t kernel_dim;
};

/// Spectral pseudo-inverse: eigenvalues above rank_tol * max|lambda| are
/// inverted, the rest are zeroed and counted as kernel.
inline PseudoInverse pseudo_inverse(const SymMatrix& a, double rank_tol = kRankTol) {
  const auto eig = eigen_sym(a);
  const std::size_t n = a.size();
  double lmax = 0.0;
  for (double l : eig.values) lmax = std::max(lmax, std::abs(l));
  Matrix inv(n, n);
  std::size_t kernel = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double l = eig.values[k];
    if (lmax == 0.0 || std::abs(l) <= rank_tol * lmax) {
      ++kernel;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) inv(i, j) += eig.vectors(i, k) * eig.vectors(j, k) / l;
  }
  return {SymMatrix(std::move(inv)), kernel};
}

/// Count of eigenvalues at or below rank_tol * max|lambda|.
inline std::size_t kernel_dimension(const SymMatrix& a, double rank_tol = kRankTol) {
  const auto eig = eigen_sym(a);
  double lmax = 0.0;
  for (double l : eig.values) lmax = std::max(lmax, std::abs(l));
  return static_cast<std::size_t>(std::count_if(eig.values.begin(), eig.values.end(), [&](double l) {
    return lmax == 0.0 || std::abs(l) <= rank_tol * lmax;
  }));
}

struct GeneralizedEigen {
  double lambda = 0.0;
  std::vector<double> vector;  ///< M-normalized; zero when range(M) is trivial
  std::size_t kernel_dim = 0;  ///< dim N(M)
};

/// Largest lambda of B x = lambda M x over range(M), for symmetric B and
/// positive semidefinite M. N(M) is deflated through the spectral
/// decomposition of M and the remaining pencil is reduced to the standard
/// problem M^{-1/2} B M^{-1/2} on range(M). B must vanish on N(M).
inline GeneralizedEigen gen_eigen_max(const SymMatrix& b, const SymMatrix& m, double rank_tol = kRankTol) {
  const std::size_t n = m.size();
  if (b.size() != n) throw DimensionError("gen_eigen_max: pencil sizes differ");
  const auto em = eigen_sym(m);
  const double lmax = std::max(std::abs(em.values.front()), std::abs(em.values.back()));
  if (lmax > 0.0 && em.values.front() < -rank_tol * lmax)
    throw DefinitenessError("gen_eigen_max: M is indefinite");

  std::vector<std::size_t> range;
  std::vector<std::size_t> null;
  for (std::size_t k = 0; k < n; ++k) {
    if (lmax > 0.0 && em.values[k] > rank_tol * lmax)
      range.push_back(k);
    else
      null.push_back(k);
  }

  const double bscale = std::max(b.matrix().max_abs(), lmax);
  for (std::size_t k : null) {
    const auto z = em.vectors.column(k);
    const auto bz = b.matrix() * z;
    double nrm = 0.0;
    for (double v : bz) nrm = std::max(nrm, std::abs(v));
    if (nrm > 1e-8 * bscale)
      throw DefinitenessError("gen_eigen_max: B does not vanish on the kernel of M (inconsistent pencil)");
  }

  GeneralizedEigen out;
  out.kernel_dim = null.size();
  out.vector.assign(n, 0.0);
  if (range.empty()) return out;

  // W = Q_r diag(lambda_r^{-1/2})
  const std::size_t r = range.size();
  Matrix w(n, r);
  for (std::size_t c = 0; c < r; ++c) {
    const double s = 1.0 / std::sqrt(em.values[range[c]]);
    for (std::size_t i = 0; i < n; ++i) w(i, c) = em.vectors(i, range[c]) * s;
  }
  const auto reduced = eigen_sym(congruence(b, w));
  out.lambda = reduced.values.back();
  const auto y = reduced.vectors.column(r - 1);
  out.vector = w * y;
  return out;
}

}  // namespace cbs
