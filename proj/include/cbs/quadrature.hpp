#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbs/error.hpp"

namespace cbs {

/// Positive-weight quadrature on [a, b] with strictly increasing nodes.
class QuadratureRule {
 public:
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights, int exactness, double a,
                 double b)
      : nodes_(std::move(nodes)), weights_(std::move(weights)), exactness_(exactness), a_(a), b_(b) {
    if (nodes_.empty() || nodes_.size() != weights_.size())
      throw DimensionError("QuadratureRule: node and weight counts must match and be nonzero");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!(weights_[i] > 0.0)) throw DomainError("QuadratureRule: weights must be positive");
      if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
        throw DomainError("QuadratureRule: nodes must be strictly increasing");
    }
  }

  /// n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2n - 1.
  /// Nodes are roots of P_n located by Newton iteration from Chebyshev guesses.
  static QuadratureRule gauss_legendre(int points, double a = 0.0, double b = 1.0) {
    if (points < 1) throw DomainError("gauss_legendre: need at least one point");
    if (!(b > a)) throw DomainError("gauss_legendre: empty interval");
    const auto n = static_cast<std::size_t>(points);
    std::vector<double> x(n), w(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                          (static_cast<double>(n) + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
          const double p2 = p1;
          p1 = p0;
          const auto kk = static_cast<double>(k);
          p0 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p2) / kk;
        }
        dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) <= 1e-15) break;
      }
      const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
      x[i] = mid - half * z;
      x[n - 1 - i] = mid + half * z;
      w[i] = w[n - 1 - i] = half * wi;
    }
    if (n % 2 == 1) x[n / 2] = mid;
    return QuadratureRule(std::move(x), std::move(w), 2 * points - 1, a, b);
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  int exactness() const noexcept { return exactness_; }
  double lower() const noexcept { return a_; }
  double upper() const noexcept { return b_; }

  bool same_grid(const QuadratureRule& other) const noexcept {
    return this == &other || (nodes_ == other.nodes_ && weights_ == other.weights_);
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  int exactness_;
  double a_, b_;
};

using RulePtr = std::shared_ptr<const QuadratureRule>;

inline RulePtr make_gauss_legendre(int points, double a = 0.0, double b = 1.0) {
  return std::make_shared<const QuadratureRule>(QuadratureRule::gauss_legendre(points, a, b));
}

/// A function represented by its values at the nodes of a quadrature rule.
class SampledFunction {
 public:
  SampledFunction(RulePtr rule, std::vector<double> values)
      : rule_(std::move(rule)), values_(std::move(values)) {
    if (!rule_) throw InputError("SampledFunction: null quadrature rule");
    if (values_.size() != rule_->size())
      throw DimensionError("SampledFunction: " + std::to_string(values_.size()) +
                           " values for " + std::to_string(rule_->size()) + " nodes");
    for (double v : values_)
      if (!std::isfinite(v)) throw DomainError("SampledFunction: non-finite sample");
  }

  /// Samples fn at the nodes of rule.
  template <class Fn>
  static SampledFunction sample(RulePtr rule, Fn&& fn) {
    std::vector<double> v;
    v.reserve(rule->size());
    for (double t : rule->nodes()) v.push_back(fn(t));
    return SampledFunction(std::move(rule), std::move(v));
  }

  const QuadratureRule& rule() const noexcept { return *rule_; }
  const RulePtr& rule_ptr() const noexcept { return rule_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  bool nonnegative() const noexcept {
    for (double v : values_)
      if (v < 0.0) return false;
    return true;
  }

 private:
  RulePtr rule_;
  std::vector<double> values_;
};

inline void require_same_grid(const SampledFunction& f, const SampledFunction& g, const char* op) {
  if (!f.rule().same_grid(g.rule()))
    throw DimensionError(std::string(op) + ": functions sampled on different grids");
}

/// Quadrature of the sampled values.
inline double integrate(const SampledFunction& f) {
  const auto w = f.rule().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
  return s;
}

/// Quadrature of a pointwise expression of the node index.
template <class Fn>
double integrate_with(const QuadratureRule& rule, Fn&& integrand) {
  const auto w = rule.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += w[i] * integrand(i);
  return s;
}

}  // namespace cbs
