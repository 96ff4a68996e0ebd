#pragma once

// Finite-dimensional Euclidean kernel: inner product, norm, the CBS gap with
// equality detection, the angle between vectors, the triangle inequality and
// the AM >= GM >= HM chain.
//
// Sums are accumulated left to right in double precision. No compensated
// summation, so results are bit-reproducible across runs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbs/error.hpp"

namespace cbs {

/// Relative threshold on gap / (|x|^2 |y|^2) below which CBS is reported as
/// an equality (collinear pair).
inline constexpr double kEqualityTol = 1e-10;

/// Finite real sequence of fixed length n >= 1.
class RealVector {
 public:
  explicit RealVector(std::vector<double> entries) : entries_(std::move(entries)) { validate(); }
  RealVector(std::initializer_list<double> entries) : entries_(entries) { validate(); }

  static RealVector zeros(std::size_t n) { return RealVector(std::vector<double>(n, 0.0)); }
  static RealVector constant(std::size_t n, double c) { return RealVector(std::vector<double>(n, c)); }
  static RealVector unit(std::size_t n, std::size_t k) {
    std::vector<double> e(n, 0.0);
    if (k >= n) throw DimensionError("unit: index " + std::to_string(k) + " out of range");
    e[k] = 1.0;
    return RealVector(std::move(e));
  }

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const noexcept { return entries_[i]; }
  std::span<const double> values() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  bool is_zero() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](double v) { return v == 0.0; });
  }

  friend RealVector operator+(const RealVector& a, const RealVector& b);
  friend RealVector operator*(double s, const RealVector& a) {
    std::vector<double> r(a.entries_);
    for (double& v : r) v *= s;
    return RealVector(std::move(r));
  }

 private:
  void validate() const {
    if (entries_.empty()) throw DimensionError("RealVector: length must be >= 1");
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (!std::isfinite(entries_[i]))
        throw DomainError("RealVector: entry " + std::to_string(i) + " is not finite");
  }

  std::vector<double> entries_;
};

inline void require_same_length(const RealVector& x, const RealVector& y, const char* op) {
  if (x.size() != y.size())
    throw DimensionError(std::string(op) + ": length mismatch (" + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()) + ")");
}

inline RealVector operator+(const RealVector& a, const RealVector& b) {
  require_same_length(a, b, "operator+");
  std::vector<double> r(a.entries_);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b.entries_[i];
  return RealVector(std::move(r));
}

inline double inner_product(const RealVector& x, const RealVector& y) {
  require_same_length(x, y, "inner_product");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm_squared(const RealVector& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

inline double norm(const RealVector& x) { return std::sqrt(norm_squared(x)); }

struct CbsGap {
  double gap;       ///< |x|^2 |y|^2 - (x.y)^2
  bool equality;    ///< collinear within kEqualityTol
};

/// (sum x_i^2)(sum y_i^2) - (sum x_i y_i)^2 together with the collinearity flag.
/// A zero argument makes the inequality hold trivially as an equality.
inline CbsGap cbs_gap(const RealVector& x, const RealVector& y) {
  require_same_length(x, y, "cbs_gap");
  const double xx = norm_squared(x);
  const double yy = norm_squared(y);
  const double xy = inner_product(x, y);
  const double scale = xx * yy;
  const double gap = scale - xy * xy;
  if (scale == 0.0) return {gap, true};
  return {gap, gap <= kEqualityTol * scale};
}

/// Lagrange's double sum sum_i sum_j (x_i y_j - x_j y_i)^2; equals 2 * cbs_gap
/// and is nonnegative term by term.
inline double lagrange_gap(const RealVector& x, const RealVector& y) {
  require_same_length(x, y, "lagrange_gap");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = x[i] * y[j] - x[j] * y[i];
      s += d * d;
    }
  return s;
}

/// Angle in [0, pi] between two nonzero vectors.
inline double angle(const RealVector& x, const RealVector& y) {
  require_same_length(x, y, "angle");
  const double nx = norm(x);
  const double ny = norm(y);
  if (nx == 0.0 || ny == 0.0) throw DomainError("angle: undefined for a zero vector");
  const double c = std::clamp(inner_product(x, y) / (nx * ny), -1.0, 1.0);
  return std::acos(c);
}

struct TriangleCheck {
  double lhs;  ///< |x + y|
  double rhs;  ///< |x| + |y|
};

inline TriangleCheck triangle_check(const RealVector& x, const RealVector& y) {
  require_same_length(x, y, "triangle_check");
  return {norm(x + y), norm(x) + norm(y)};
}

struct MeanChain {
  double am;
  double gm;
  std::optional<double> hm;  ///< present only when every entry is positive
};

/// Arithmetic, geometric and harmonic means of a nonnegative sequence.
/// The geometric mean is formed in the log domain relative to the largest
/// entry; a zero entry gives gm = 0.
inline MeanChain mean_chain(const RealVector& a) {
  const auto n = static_cast<double>(a.size());
  double top = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0.0) throw DomainError("mean_chain: entry " + std::to_string(i) + " is negative");
    top = std::max(top, a[i]);
  }
  double sum = 0.0;
  double log_sum = 0.0;
  double inv_sum = 0.0;
  bool has_zero = false;
  for (double v : a) {
    sum += v;
    if (v == 0.0) {
      has_zero = true;
    } else {
      log_sum += std::log(v / top);
      inv_sum += 1.0 / v;
    }
  }
  MeanChain m{sum / n, has_zero ? 0.0 : top * std::exp(log_sum / n), std::nullopt};
  if (!has_zero) m.hm = n / inv_sum;
  return m;
}

/// Harmonic mean; refuses zero entries.
inline double harmonic_mean(const RealVector& a) {
  const auto m = mean_chain(a);
  if (!m.hm) throw DomainError("harmonic_mean: entries must be nonzero");
  return *m.hm;
}

}  // namespace cbs
