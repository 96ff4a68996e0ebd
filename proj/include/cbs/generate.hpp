#pragma once

// Random inputs shared by the property suites, the CLI and the tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "cbs/elasticity.hpp"
#include "cbs/random.hpp"
#include "cbs/strengthened.hpp"
#include "cbs/symlin.hpp"

namespace cbs {

inline std::vector<double> gaussian_vector(Engine& eng, std::size_t n) {
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(eng);
  return v;
}

/// A = G G^T / n + shift I with G standard Gaussian.
inline SymMatrix random_spd(Engine& eng, std::size_t n, double shift = 0.05) {
  const Matrix g(n, n, gaussian_vector(eng, n * n));
  Matrix a = g * g.transposed();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = a(i, j) / static_cast<double>(n) + (i == j ? shift : 0.0);
  return SymMatrix(std::move(a));
}

/// A = G G^T with G of size n x rank: semidefinite with kernel n - rank.
inline SymMatrix random_spsd(Engine& eng, std::size_t n, std::size_t rank) {
  const Matrix g(n, rank, gaussian_vector(eng, n * rank));
  return SymMatrix(g * g.transposed());
}

/// Random split of {0..n-1} into two nonempty sets (n >= 2), each sorted.
inline BlockPartition random_partition(Engine& eng, std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), eng);
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n - 1)(eng);
  std::vector<std::size_t> u(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::size_t> v(idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end());
  std::sort(u.begin(), u.end());
  std::sort(v.begin(), v.end());
  return BlockPartition(std::move(u), std::move(v), n);
}

/// Shape quality in (0, 1]: 1 for the equilateral triangle / regular tetrahedron.
template <int Dim>
double shape_quality(const Simplex<Dim>& s) {
  double sum_sq = 0.0;
  int edges = 0;
  for (int i = 0; i <= Dim; ++i)
    for (int j = i + 1; j <= Dim; ++j, ++edges)
      for (int k = 0; k < Dim; ++k) sum_sq += (s[i][k] - s[j][k]) * (s[i][k] - s[j][k]);
  const double vol = std::abs(signed_volume<Dim>(s));
  if constexpr (Dim == 2) {
    return 4.0 * std::sqrt(3.0) * vol / sum_sq;
  } else {
    const double lrms = std::sqrt(sum_sq / edges);
    return 6.0 * std::sqrt(2.0) * vol / (lrms * lrms * lrms);
  }
}

/// Simplex with vertices uniform in the unit cube, redrawn until its shape
/// quality reaches min_quality.
template <int Dim>
Simplex<Dim> random_simplex(Engine& eng, double min_quality = 0.1) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    Simplex<Dim> s;
    for (auto& p : s)
      for (double& c : p) c = unit(eng);
    if (!is_degenerate<Dim>(s) && shape_quality<Dim>(s) >= min_quality) return s;
  }
}

/// Polynomial with coefficients uniform in [lo, hi], ascending powers.
inline std::vector<double> random_polynomial(Engine& eng, int degree, double lo, double hi) {
  std::uniform_real_distribution<double> coef(lo, hi);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  for (double& x : c) x = coef(eng);
  return c;
}

inline double eval_polynomial(const std::vector<double>& c, double t) {
  double s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * t + *it;
  return s;
}

}  // namespace cbs
