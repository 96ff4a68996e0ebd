#pragma once

// Strengthened CBS constant of a symmetric positive semidefinite matrix A with
// respect to a split of its coordinates into blocks U and V:
//
//   gamma^2 = sup_{u in U, v in V} (u^T A v)^2 / ((u^T A u)(v^T A v)).
//
// gamma_exact reduces the sup to the largest eigenvalue of the pencil
// A21 A11^+ A12 v = lambda A22 v on range(A22). gamma_alternating and
// gamma_sampling maximize the same quotient by independent routes and serve
// as cross-checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cbs/error.hpp"
#include "cbs/parallel.hpp"
#include "cbs/random.hpp"
#include "cbs/symlin.hpp"
#include "cbs/vector.hpp"

namespace cbs {

/// gamma^2 above this is flagged as numerically indistinguishable from 1.
inline constexpr double kNearOneTol = 1e-8;

/// Disjoint, covering, nonempty split of {0, ..., n-1} into U and V.
class BlockPartition {
 public:
  BlockPartition(std::vector<std::size_t> u, std::vector<std::size_t> v, std::size_t n)
      : u_(std::move(u)), v_(std::move(v)) {
    if (u_.empty() || v_.empty()) throw DomainError("BlockPartition: both index sets must be nonempty");
    std::vector<int> seen(n, 0);
    for (const auto* set : {&u_, &v_})
      for (std::size_t i : *set) {
        if (i >= n) throw DimensionError("BlockPartition: index " + std::to_string(i) + " out of range");
        if (seen[i]++) throw DomainError("BlockPartition: index " + std::to_string(i) + " appears twice");
      }
    if (u_.size() + v_.size() != n) throw DomainError("BlockPartition: index sets do not cover the matrix");
  }

  /// U = {0, ..., k-1}, V = {k, ..., n-1}.
  static BlockPartition leading(std::size_t k, std::size_t n) {
    std::vector<std::size_t> u(k), v(n - std::min(k, n));
    std::iota(u.begin(), u.end(), std::size_t{0});
    std::iota(v.begin(), v.end(), k);
    return BlockPartition(std::move(u), std::move(v), n);
  }

  const std::vector<std::size_t>& u() const noexcept { return u_; }
  const std::vector<std::size_t>& v() const noexcept { return v_; }
  std::size_t size() const noexcept { return u_.size() + v_.size(); }
  BlockPartition swapped() const { return BlockPartition(v_, u_, size()); }

 private:
  std::vector<std::size_t> u_, v_;
};

enum class GammaMethod { eigen, alternating, sampling };

inline const char* to_string(GammaMethod m) {
  switch (m) {
    case GammaMethod::eigen: return "eigen";
    case GammaMethod::alternating: return "alternating";
    case GammaMethod::sampling: return "sampling";
  }
  return "?";
}

struct GammaResult {
  double gamma2 = 0.0;
  double gamma = 0.0;
  RealVector u_star = RealVector{0.0};  ///< block-local coordinates in U
  RealVector v_star = RealVector{0.0};  ///< block-local coordinates in V
  std::size_t kernel_dim_u = 0;
  std::size_t kernel_dim_v = 0;
  GammaMethod method = GammaMethod::eigen;
  bool near_one = false;         ///< gamma2 > 1 - kNearOneTol
  bool empty_subspace = false;   ///< nothing left after deflation; gamma2 := 0
  bool converged = true;         ///< alternating: stopped on tol, not max_iter
  std::size_t iterations = 0;
};

/// A split into the four blocks of the partition.
struct BlockedMatrix {
  Matrix a11, a12, a22;
  double scale;  ///< |A|_inf

  BlockedMatrix(const SymMatrix& a, const BlockPartition& part)
      : a11(a.block(part.u(), part.u())),
        a12(a.block(part.u(), part.v())),
        a22(a.block(part.v(), part.v())),
        scale(a.matrix().inf_norm()) {
    if (part.size() != a.size()) throw DimensionError("BlockPartition does not match matrix size");
  }

  struct Quotient {
    double cross, uu, vv;
    /// (u^T A v)^2 / ((u^T A u)(v^T A v)), 0 when a denominator vanishes.
    double ratio(double floor) const noexcept {
      if (uu <= floor || vv <= floor) return 0.0;
      return cross * cross / uu / vv;
    }
  };

  Quotient quotient(std::span<const double> u, std::span<const double> v) const {
    return {dot(u, a12 * v), dot(u, a11 * u), dot(v, a22 * v)};
  }
};

inline void require_semidefinite(const SymMatrix& a, double rank_tol = kRankTol) {
  const auto eig = eigen_sym(a);
  const double lmax = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
  if (eig.values.front() < -rank_tol * lmax)
    throw DefinitenessError("matrix is not positive semidefinite (lambda_min = " +
                            std::to_string(eig.values.front()) + ")");
}

namespace detail {

inline void finish(GammaResult& r) {
  r.gamma2 = std::max(r.gamma2, 0.0);
  r.gamma = std::sqrt(r.gamma2);
  r.near_one = r.gamma2 > 1.0 - kNearOneTol;
}

inline std::vector<double> energy_normalized(std::vector<double> x, const Matrix& m) {
  const double e = dot(x, m * x);
  if (e > 0.0) {
    const double s = 1.0 / std::sqrt(e);
    for (double& v : x) v *= s;
  }
  return x;
}

inline RealVector to_real(std::vector<double> x) { return RealVector(std::move(x)); }

}  // namespace detail

/// Exact optimal constant via the deflated generalized eigenproblem.
inline GammaResult gamma_exact(const SymMatrix& a, const BlockPartition& part, double rank_tol = kRankTol) {
  require_semidefinite(a, rank_tol);
  const BlockedMatrix blk(a, part);
  const auto pinv11 = pseudo_inverse(SymMatrix(blk.a11), rank_tol);
  const Matrix coupling = pinv11.inverse.matrix() * blk.a12;  // A11^+ A12
  const SymMatrix pencil_b(blk.a12.transposed() * coupling);
  const auto ge = gen_eigen_max(pencil_b, SymMatrix(blk.a22), rank_tol);

  GammaResult r;
  r.method = GammaMethod::eigen;
  r.kernel_dim_u = pinv11.kernel_dim;
  r.kernel_dim_v = ge.kernel_dim;
  r.empty_subspace = ge.kernel_dim == part.v().size() || pinv11.kernel_dim == part.u().size();
  r.gamma2 = r.empty_subspace ? 0.0 : ge.lambda;
  r.v_star = detail::to_real(ge.vector);
  r.u_star = detail::to_real(coupling * ge.vector);
  detail::finish(r);
  return r;
}

/// Alternating maximization: the optimal u for fixed v solves A11 u = A12 v,
/// the optimal v for fixed u solves A22 v = A21 u. The quotient never
/// decreases; iteration stops when its relative change drops below tol.
/// The start vector in V is drawn from seed.
inline GammaResult gamma_alternating(const SymMatrix& a, const BlockPartition& part, std::size_t max_iter = 200000,
                                     double tol = 1e-14, std::uint64_t seed = 0, double rank_tol = kRankTol) {
  require_semidefinite(a, rank_tol);
  const BlockedMatrix blk(a, part);
  const auto pinv11 = pseudo_inverse(SymMatrix(blk.a11), rank_tol);
  const auto pinv22 = pseudo_inverse(SymMatrix(blk.a22), rank_tol);
  const Matrix a21 = blk.a12.transposed();
  const double floor = rank_tol * blk.scale;

  auto eng = make_engine(seed, 0xa17e);
  std::normal_distribution<double> normal;
  std::vector<double> v(part.v().size());
  for (double& x : v) x = normal(eng);
  v = pinv22.inverse.matrix() * (blk.a22 * v);  // project onto range(A22)
  v = detail::energy_normalized(std::move(v), blk.a22);

  GammaResult r;
  r.method = GammaMethod::alternating;
  r.kernel_dim_u = pinv11.kernel_dim;
  r.kernel_dim_v = pinv22.kernel_dim;
  r.converged = false;
  std::vector<double> u(part.u().size(), 0.0);
  double best = 0.0;
  std::vector<double> best_u = u, best_v = v;

  for (std::size_t it = 1; it <= max_iter; ++it) {
    r.iterations = it;
    u = detail::energy_normalized(pinv11.inverse.matrix() * (blk.a12 * v), blk.a11);
    const double ru = blk.quotient(u, v).ratio(floor);
    v = detail::energy_normalized(pinv22.inverse.matrix() * (a21 * u), blk.a22);
    const double rv = blk.quotient(u, v).ratio(floor);
    const double current = std::max(ru, rv);
    const double previous = best;
    if (current >= best) {
      best = current;
      best_u = u;
      best_v = v;
    }
    if (current == 0.0 || std::abs(current - previous) <= tol * current) {
      r.converged = true;
      break;
    }
  }
  r.gamma2 = best;
  r.u_star = detail::to_real(best_u);
  r.v_star = detail::to_real(best_v);
  r.empty_subspace = best == 0.0 && (pinv11.kernel_dim == part.u().size() || pinv22.kernel_dim == part.v().size());
  detail::finish(r);
  return r;
}

/// Monte-Carlo lower bound on gamma^2 from `trials` evaluations of the
/// quotient at random unit pairs. The first half of the budget is spent on
/// independent Gaussian directions, in fixed-size chunks with their own
/// counter-derived streams so the result does not depend on the thread count.
/// The second half continues from the best pair with a (1+1) random search
/// (Gaussian perturbation, accepted only on improvement, adaptive step).
/// Every evaluated pair is admissible, so the result never exceeds the sup.
inline GammaResult gamma_sampling(const SymMatrix& a, const BlockPartition& part, std::size_t trials,
                                  std::uint64_t seed, double rank_tol = kRankTol) {
  constexpr std::size_t kChunk = 4096;
  const BlockedMatrix blk(a, part);
  const double floor = rank_tol * blk.scale;
  const std::size_t nu = part.u().size(), nv = part.v().size();

  auto draw_unit = [](Engine& eng, std::normal_distribution<double>& normal, std::vector<double>& x) {
    double s = 0.0;
    for (double& c : x) {
      c = normal(eng);
      s += c * c;
    }
    s = 1.0 / std::sqrt(s);
    for (double& c : x) c *= s;
  };

  struct Best {
    double ratio = -1.0;
    std::vector<double> u, v;
  };
  const std::size_t iid = std::max<std::size_t>(1, trials / 2);
  const std::size_t chunks = (iid + kChunk - 1) / kChunk;
  std::vector<Best> per_chunk(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    auto eng = make_engine(seed, 0x5a3f, c);
    std::normal_distribution<double> normal;
    std::vector<double> u(nu), v(nv);
    Best& b = per_chunk[c];
    const std::size_t hi = std::min(iid, (c + 1) * kChunk);
    for (std::size_t t = c * kChunk; t < hi; ++t) {
      draw_unit(eng, normal, u);
      draw_unit(eng, normal, v);
      const double q = blk.quotient(u, v).ratio(floor);
      if (q > b.ratio) {
        b.ratio = q;
        b.u = u;
        b.v = v;
      }
    }
  });
  Best best = per_chunk.front();
  for (const auto& b : per_chunk)
    if (b.ratio > best.ratio) best = b;

  if (best.ratio > 0.0) {
    auto eng = make_engine(seed, 0x5eac);
    std::normal_distribution<double> normal;
    double step = 0.3;
    std::vector<double> u(nu), v(nv);
    for (std::size_t t = iid; t < trials; ++t) {
      double su = 0.0, sv = 0.0;
      for (std::size_t i = 0; i < nu; ++i) su += (u[i] = best.u[i] + step * normal(eng)) * u[i];
      for (std::size_t i = 0; i < nv; ++i) sv += (v[i] = best.v[i] + step * normal(eng)) * v[i];
      su = 1.0 / std::sqrt(su);
      sv = 1.0 / std::sqrt(sv);
      for (double& c : u) c *= su;
      for (double& c : v) c *= sv;
      const double q = blk.quotient(u, v).ratio(floor);
      if (q > best.ratio) {
        best.ratio = q;
        best.u = u;
        best.v = v;
        step = std::min(step * 1.5, 1.0);
      } else {
        step = std::max(step * 0.95, 1e-12);
      }
    }
  }

  GammaResult r;
  r.method = GammaMethod::sampling;
  r.iterations = trials;
  r.gamma2 = std::max(best.ratio, 0.0);
  if (!best.u.empty()) {
    r.u_star = detail::to_real(best.u);
    r.v_star = detail::to_real(best.v);
  }
  r.kernel_dim_u = kernel_dimension(SymMatrix(blk.a11), rank_tol);
  r.kernel_dim_v = kernel_dimension(SymMatrix(blk.a22), rank_tol);
  detail::finish(r);
  return r;
}

/// Tests |u^T A v| <= gamma sqrt(u^T A u) sqrt(v^T A v) + 1e-10 |A| on the
/// certificate pair of g (when it has one) and on `trials` random unit pairs.
inline bool strengthened_check(const SymMatrix& a, const BlockPartition& part, const GammaResult& g,
                               std::size_t trials, std::uint64_t seed = 0) {
  const BlockedMatrix blk(a, part);
  const double slack = 1e-10 * blk.scale;
  auto holds = [&](std::vector<double> u, std::vector<double> v) {
    const double nu = std::sqrt(dot(u, u)), nv = std::sqrt(dot(v, v));
    if (nu == 0.0 || nv == 0.0) return true;
    for (double& c : u) c /= nu;
    for (double& c : v) c /= nv;
    const auto q = blk.quotient(u, v);
    return std::abs(q.cross) <= g.gamma * std::sqrt(std::max(q.uu, 0.0)) * std::sqrt(std::max(q.vv, 0.0)) + slack;
  };
  if (g.u_star.size() == part.u().size() && g.v_star.size() == part.v().size()) {
    const auto us = g.u_star.values();
    const auto vs = g.v_star.values();
    if (!holds({us.begin(), us.end()}, {vs.begin(), vs.end()})) return false;
  }
  auto eng = make_engine(seed, 0xc4ec);
  std::normal_distribution<double> normal;
  std::vector<double> u(part.u().size()), v(part.v().size());
  for (std::size_t t = 0; t < trials; ++t) {
    for (double& c : u) c = normal(eng);
    for (double& c : v) c = normal(eng);
    if (!holds(u, v)) return false;
  }
  return true;
}

}  // namespace cbs
