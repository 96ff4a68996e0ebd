#pragma once

// Young's inequality and the integral inequalities of Hoelder and Minkowski,
// evaluated by quadrature on sampled nonnegative functions.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cbs/error.hpp"
#include "cbs/quadrature.hpp"

namespace cbs {

/// Gap tolerance for the power inequalities: gap >= -kPowerGapTol * max(rhs, 1).
inline constexpr double kPowerGapTol = 1e-9;

/// Conjugate exponents p, q > 1 with 1/p + 1/q = 1.
class ConjugatePair {
 public:
  ConjugatePair(double p, double q) : p_(p), q_(q) {
    if (!(p > 1.0) || !(q > 1.0) || !std::isfinite(p) || !std::isfinite(q))
      throw DomainError("ConjugatePair: exponents must be finite and > 1");
    if (std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-12)
      throw DomainError("ConjugatePair: 1/p + 1/q must equal 1");
  }
  static ConjugatePair from_p(double p) {
    if (!(p > 1.0)) throw DomainError("ConjugatePair: p must be > 1");
    return ConjugatePair(p, p / (p - 1.0));
  }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }

 private:
  double p_, q_;
};

/// v^p for v >= 0, with 0^p = 0.
inline double nonneg_pow(double v, double p) {
  if (v == 0.0) return 0.0;
  if (p == 2.0) return v * v;
  if (p == 1.0) return v;
  return std::exp(p * std::log(v));
}

struct YoungCheck {
  double lhs;  ///< xy
  double rhs;  ///< x^p/p + y^q/q
  bool equality;
};

/// Equality holds exactly when x^p = y^q.
inline YoungCheck young_check(double x, double y, const ConjugatePair& c, double tol = 1e-10) {
  if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("young_check: x and y must be >= 0");
  const double xp = nonneg_pow(x, c.p());
  const double yq = nonneg_pow(y, c.q());
  const bool eq = std::abs(xp - yq) <= tol * std::max({xp, yq, 1e-300});
  return {x * y, xp / c.p() + yq / c.q(), eq};
}

struct NormInequality {
  double lhs;
  double rhs;
  double gap;  ///< rhs - lhs
  bool holds() const noexcept { return gap >= -kPowerGapTol * std::max(rhs, 1.0); }
};

/// (integral of f^p)^(1/p).
inline double lp_norm(const SampledFunction& f, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  if (!f.nonnegative()) throw DomainError("lp_norm: negative sample");
  const double s = integrate_with(f.rule(), [&](std::size_t i) { return nonneg_pow(f[i], p); });
  return nonneg_pow(s, 1.0 / p);
}

/// integral fg <= |f|_p |g|_q.
inline NormInequality holder_check(const SampledFunction& f, const SampledFunction& g,
                                   const ConjugatePair& c) {
  require_same_grid(f, g, "holder_check");
  if (!f.nonnegative() || !g.nonnegative()) throw DomainError("holder_check: negative sample");
  const double lhs = integrate_with(f.rule(), [&](std::size_t i) { return f[i] * g[i]; });
  const double rhs = lp_norm(f, c.p()) * lp_norm(g, c.q());
  return {lhs, rhs, rhs - lhs};
}

/// |f + g|_p <= |f|_p + |g|_p.
inline NormInequality minkowski_check(const SampledFunction& f, const SampledFunction& g,
                                      double p) {
  require_same_grid(f, g, "minkowski_check");
  if (!(p > 1.0)) throw DomainError("minkowski_check: p must be > 1");
  if (!f.nonnegative() || !g.nonnegative()) throw DomainError("minkowski_check: negative sample");
  std::vector<double> sum(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sum[i] = f[i] + g[i];
  const SampledFunction fg(f.rule_ptr(), std::move(sum));
  const double lhs = lp_norm(fg, p);
  const double rhs = lp_norm(f, p) + lp_norm(g, p);
  return {lhs, rhs, rhs - lhs};
}

/// Integral CBS for signed functions: integral fg <= sqrt(integral f^2) sqrt(integral g^2).
inline NormInequality integral_cbs_check(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g, "integral_cbs_check");
  const auto& q = f.rule();
  const double fg = integrate_with(q, [&](std::size_t i) { return f[i] * g[i]; });
  const double ff = integrate_with(q, [&](std::size_t i) { return f[i] * f[i]; });
  const double gg = integrate_with(q, [&](std::size_t i) { return g[i] * g[i]; });
  const double rhs = std::sqrt(ff) * std::sqrt(gg);
  return {fg, rhs, rhs - fg};
}

}  // namespace cbs
