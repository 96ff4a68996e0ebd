#pragma once

// Weighted CBS-type inequality
//
//   <x, y> = (sum p_i)(sum p_i x_i y_i) - (sum p_i x_i)(sum p_i y_i)
//   |<x, y>| <= sqrt(<x, x>) sqrt(<y, y>)
//
// with equality iff some combination a x + b y is a constant vector, and its
// integral counterpart where the sums become integrals against a positive
// density p. The integral form is the product
//   int p * int p f g - int p f * int p g.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbs/error.hpp"
#include "cbs/quadrature.hpp"
#include "cbs/symlin.hpp"
#include "cbs/vector.hpp"

namespace cbs {

/// Strictly positive, finite weights.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw DimensionError("WeightVector: length must be >= 1");
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (!std::isfinite(w_[i]) || !(w_[i] > 0.0))
        throw DomainError("WeightVector: weight " + std::to_string(i) + " must be positive and finite");
  }
  WeightVector(std::initializer_list<double> w) : WeightVector(std::vector<double>(w)) {}
  static WeightVector uniform(std::size_t n) { return WeightVector(std::vector<double>(n, 1.0)); }

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const noexcept { return w_[i]; }
  std::span<const double> values() const noexcept { return w_; }

 private:
  std::vector<double> w_;
};

/// Coefficients of a x + b y = c 1 with a^2 + b^2 = 1.
struct ConstantCombination {
  double a, b, c;
  double residual;  ///< |a x + b y - c 1| / (|a||x| + |b||y| + |c| sqrt(n))
};

struct WeightedPairReport {
  double lhs;   ///< <x, y>
  double rhs;   ///< sqrt(<x, x>) sqrt(<y, y>)
  double gap;   ///< rhs - |lhs|
  bool equality;
  std::optional<ConstantCombination> combo;

  double scale() const noexcept { return std::max({std::abs(lhs), rhs, 1.0}); }
  bool holds(double tol = 1e-10) const noexcept { return gap >= -tol * scale(); }
};

namespace detail {

/// Least-squares a x + b y = c 1 under a^2 + b^2 = 1: after eliminating c
/// (the mean of a x + b y), (a, b) is the smallest eigenvector of the Gram
/// matrix of the centered vectors.
inline ConstantCombination fit_constant_combination(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double gxx = 0.0, gxy = 0.0, gyy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - xm, dy = y[i] - ym;
    gxx += dx * dx;
    gxy += dx * dy;
    gyy += dy * dy;
  }
  const auto eig = eigen_sym(SymMatrix(2, {gxx, gxy, gxy, gyy}));
  double a = eig.vectors(0, 0);
  double b = eig.vectors(1, 0);
  if (a < 0.0 || (a == 0.0 && b < 0.0)) {
    a = -a;
    b = -b;
  }
  const double c = a * xm + b * ym;
  double res = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = a * x[i] + b * y[i] - c;
    res += r * r;
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  const double denom = std::abs(a) * std::sqrt(nx) + std::abs(b) * std::sqrt(ny) +
                       std::abs(c) * std::sqrt(static_cast<double>(n));
  return {a, b, c, denom > 0.0 ? std::sqrt(res) / denom : 0.0};
}

inline WeightedPairReport make_report(double xy, double xx, double yy, std::span<const double> x,
                                      std::span<const double> y) {
  const double rhs = std::sqrt(std::max(xx, 0.0)) * std::sqrt(std::max(yy, 0.0));
  WeightedPairReport r{xy, rhs, rhs - std::abs(xy), false, std::nullopt};
  const double scale = std::max(std::abs(xy), rhs);
  r.equality = scale == 0.0 || r.gap <= kEqualityTol * scale;
  if (r.equality) r.combo = fit_constant_combination(x, y);
  return r;
}

}  // namespace detail

/// (sum p)(sum p x y) - (sum p x)(sum p y), evaluated as the equal
/// (sum p) sum p (x - xm)(y - ym) with p-weighted means xm, ym.
inline double weighted_form(const WeightVector& p, const RealVector& x, const RealVector& y) {
  require_same_length(x, y, "weighted_form");
  if (p.size() != x.size()) throw DimensionError("weighted_form: weight length mismatch");
  double sp = 0.0, spx = 0.0, spy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sp += p[i];
    spx += p[i] * x[i];
    spy += p[i] * y[i];
  }
  const double xm = spx / sp, ym = spy / sp;
  double cov = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) cov += p[i] * ((x[i] - xm) * (y[i] - ym));
  return sp * cov;
}

inline WeightedPairReport weighted_cbs_check(const WeightVector& p, const RealVector& x, const RealVector& y) {
  const double xy = weighted_form(p, x, y);
  const double xx = weighted_form(p, x, x);
  const double yy = weighted_form(p, y, y);
  return detail::make_report(xy, xx, yy, x.values(), y.values());
}

/// Quadrature approximation of int p * int p f g - int p f * int p g,
/// evaluated in centered form like weighted_form.
inline double integral_weighted_form(const SampledFunction& p, const SampledFunction& f,
                                     const SampledFunction& g) {
  require_same_grid(p, f, "integral_weighted_form");
  require_same_grid(p, g, "integral_weighted_form");
  for (double v : p.values())
    if (!(v > 0.0)) throw DomainError("integral_weighted_form: density p must be positive");
  const auto& q = p.rule();
  const double ip = integrate(p);
  const double fm = integrate_with(q, [&](std::size_t i) { return p[i] * f[i]; }) / ip;
  const double gm = integrate_with(q, [&](std::size_t i) { return p[i] * g[i]; }) / ip;
  return ip * integrate_with(q, [&](std::size_t i) { return p[i] * ((f[i] - fm) * (g[i] - gm)); });
}

inline WeightedPairReport integral_weighted_cbs_check(const SampledFunction& p, const SampledFunction& f,
                                                      const SampledFunction& g) {
  const double fg = integral_weighted_form(p, f, g);
  const double ff = integral_weighted_form(p, f, f);
  const double gg = integral_weighted_form(p, g, g);
  return detail::make_report(fg, ff, gg, f.values(), g.values());
}

/// True when max_i |x_i - mean| <= tol * max_i |x_i|.
inline bool is_constant(const RealVector& x, double tol = 1e-12) {
  double mean = 0.0, inf = 0.0;
  for (double v : x) {
    mean += v;
    inf = std::max(inf, std::abs(v));
  }
  mean /= static_cast<double>(x.size());
  double dev = 0.0;
  for (double v : x) dev = std::max(dev, std::abs(v - mean));
  return dev <= tol * inf;
}

}  // namespace cbs
