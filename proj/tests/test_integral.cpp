#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cbs/generate.hpp"
#include "cbs/integral.hpp"
#include "cbs/quadrature.hpp"
#include "cbs/random.hpp"

using namespace cbs;

namespace {

SampledFunction on(const RulePtr& r, double (*fn)(double)) { return SampledFunction::sample(r, fn); }

}  // namespace

TEST(Quadrature, IntegratesMonomialsUpToExactness) {
  for (int pts : {1, 2, 4, 8, 16, 32}) {
    const auto r = QuadratureRule::gauss_legendre(pts);
    EXPECT_EQ(r.exactness(), 2 * pts - 1);
    for (int k = 0; k <= r.exactness(); ++k) {
      const double q = integrate_with(r, [&](std::size_t i) { return std::pow(r.nodes()[i], k); });
      EXPECT_NEAR(q, 1.0 / (k + 1), 1e-13 / (k + 1)) << pts << " points, degree " << k;
    }
  }
}

TEST(Quadrature, ShiftedInterval) {
  const auto r = QuadratureRule::gauss_legendre(6, -1.0, 3.0);
  const double q = integrate_with(r, [&](std::size_t i) { return std::pow(r.nodes()[i], 5); });
  EXPECT_NEAR(q, (std::pow(3.0, 6) - 1.0) / 6.0, 1e-11);
  EXPECT_GE(r.nodes().front(), -1.0);
  EXPECT_LE(r.nodes().back(), 3.0);
}

TEST(Quadrature, Validation) {
  EXPECT_THROW(QuadratureRule::gauss_legendre(0), DomainError);
  EXPECT_THROW(QuadratureRule::gauss_legendre(3, 1.0, 1.0), DomainError);
  EXPECT_THROW(QuadratureRule({0.1, 0.2}, {1.0}, 1, 0, 1), DimensionError);
  EXPECT_THROW(QuadratureRule({0.2, 0.1}, {0.5, 0.5}, 1, 0, 1), DomainError);
  EXPECT_THROW(QuadratureRule({0.1, 0.2}, {0.5, -0.5}, 1, 0, 1), DomainError);
  const auto r = make_gauss_legendre(4);
  EXPECT_THROW(SampledFunction(r, {1.0, 2.0}), DimensionError);
  EXPECT_THROW(SampledFunction(r, {1.0, 2.0, NAN, 1.0}), DomainError);
  EXPECT_THROW(SampledFunction(nullptr, {}), InputError);
}

TEST(ConjugatePair, Construction) {
  EXPECT_NO_THROW(ConjugatePair(2, 2));
  EXPECT_NO_THROW(ConjugatePair(3, 1.5));
  EXPECT_THROW(ConjugatePair(2, 3), DomainError);
  EXPECT_THROW(ConjugatePair(1, 1e300), DomainError);
  EXPECT_THROW(ConjugatePair::from_p(0.5), DomainError);
  for (double p : {1.01, 1.5, 2.0, 3.0, 7.25, 100.0}) {
    const auto c = ConjugatePair::from_p(p);
    EXPECT_NEAR(1.0 / c.p() + 1.0 / c.q(), 1.0, 1e-15);
  }
}

TEST(Young, Examples) {
  const ConjugatePair two(2, 2);
  const auto a = young_check(1, 1, two);
  EXPECT_EQ(a.lhs, 1.0);
  EXPECT_EQ(a.rhs, 1.0);
  EXPECT_TRUE(a.equality);
  const auto b = young_check(2, 1, two);
  EXPECT_EQ(b.lhs, 2.0);
  EXPECT_EQ(b.rhs, 2.5);
  EXPECT_FALSE(b.equality);
  const auto c = young_check(std::sqrt(2.0), std::sqrt(2.0), two);
  EXPECT_NEAR(c.lhs, 2.0, 1e-15);
  EXPECT_NEAR(c.rhs, 2.0, 1e-15);
  EXPECT_TRUE(c.equality);
  EXPECT_THROW(young_check(-1, 1, two), DomainError);
}

TEST(Young, RandomHoldsAndEqualityAtPowerMatch) {
  auto eng = make_engine(4);
  std::uniform_real_distribution<double> u(0.0, 5.0), pd(1.1, 6.0);
  for (int t = 0; t < 2000; ++t) {
    const auto c = ConjugatePair::from_p(pd(eng));
    const double x = u(eng), y = u(eng);
    const auto r = young_check(x, y, c);
    EXPECT_LE(r.lhs, r.rhs + 1e-12 * std::max(r.rhs, 1.0));
    const double ye = std::pow(x, c.p() / c.q());  // y^q = x^p
    const auto e = young_check(x, ye, c);
    EXPECT_TRUE(e.equality);
    EXPECT_NEAR(e.lhs, e.rhs, 1e-12 * std::max(e.rhs, 1.0));
  }
}

TEST(Holder, Examples) {
  const auto r = make_gauss_legendre(16);
  const auto one = on(r, [](double) { return 1.0; });
  const auto t = on(r, [](double s) { return s; });
  for (double p : {1.5, 2.0, 3.0}) {
    const auto h = holder_check(one, one, ConjugatePair::from_p(p));
    EXPECT_NEAR(h.lhs, 1.0, 1e-14);
    EXPECT_NEAR(h.rhs, 1.0, 1e-14);
  }
  const auto h = holder_check(t, one, ConjugatePair(2, 2));
  EXPECT_NEAR(h.lhs, 0.5, 1e-14);
  EXPECT_NEAR(h.rhs, std::sqrt(1.0 / 3.0), 1e-14);
  EXPECT_TRUE(h.holds());
}

TEST(Holder, Errors) {
  const auto r = make_gauss_legendre(8), r2 = make_gauss_legendre(9);
  const auto neg = on(r, [](double s) { return s - 0.5; });
  const auto pos = on(r, [](double s) { return s; });
  EXPECT_THROW(holder_check(neg, pos, ConjugatePair(2, 2)), DomainError);
  EXPECT_THROW(holder_check(pos, on(r2, [](double s) { return s; }), ConjugatePair(2, 2)), DimensionError);
  EXPECT_THROW(minkowski_check(pos, pos, 1.0), DomainError);
  EXPECT_THROW(minkowski_check(pos, neg, 2.0), DomainError);
}

TEST(Holder, RandomPolynomialsStableUnderRefinement) {
  auto eng = make_engine(21);
  const auto r = make_gauss_legendre(12), fine = make_gauss_legendre(24);
  const ConjugatePair c(3, 1.5);
  for (int t = 0; t < 200; ++t) {
    const auto fc = random_polynomial(eng, 4, 0.0, 1.0), gc = random_polynomial(eng, 4, 0.0, 1.0);
    auto f = [&](double s) { return eval_polynomial(fc, s); };
    auto g = [&](double s) { return eval_polynomial(gc, s); };
    const auto h = holder_check(SampledFunction::sample(r, f), SampledFunction::sample(r, g), c);
    const auto hf = holder_check(SampledFunction::sample(fine, f), SampledFunction::sample(fine, g), c);
    EXPECT_GE(h.gap, -1e-9 * std::max(h.rhs, 1.0));
    // lhs is a degree-8 polynomial integral, exact on both grids
    EXPECT_NEAR(h.lhs, hf.lhs, 1e-12 * std::max(h.lhs, 1.0));
  }
}

TEST(Holder, ExponentTwoAgreesWithIntegralCbs) {
  auto eng = make_engine(22);
  const auto r = make_gauss_legendre(16);
  for (int t = 0; t < 200; ++t) {
    const auto fc = random_polynomial(eng, 5, 0.0, 1.0), gc = random_polynomial(eng, 5, 0.0, 1.0);
    const auto f = SampledFunction::sample(r, [&](double s) { return eval_polynomial(fc, s); });
    const auto g = SampledFunction::sample(r, [&](double s) { return eval_polynomial(gc, s); });
    const auto h = holder_check(f, g, ConjugatePair(2, 2));
    const auto c = integral_cbs_check(f, g);
    EXPECT_NEAR(h.lhs, c.lhs, 1e-12 * std::max(c.rhs, 1.0));
    EXPECT_NEAR(h.rhs, c.rhs, 1e-12 * std::max(c.rhs, 1.0));
  }
}

TEST(Minkowski, Examples) {
  const auto r = make_gauss_legendre(16);
  const auto t = on(r, [](double s) { return s; });
  const auto u = on(r, [](double s) { return 1.0 - s; });
  const auto m = minkowski_check(t, u, 2.0);
  EXPECT_NEAR(m.lhs, 1.0, 1e-14);
  EXPECT_NEAR(m.rhs, 2.0 * std::sqrt(1.0 / 3.0), 1e-14);
  const auto same = minkowski_check(t, t, 3.0);
  EXPECT_NEAR(same.lhs, same.rhs, 1e-14);
  EXPECT_NEAR(same.rhs, 2.0 * lp_norm(t, 3.0), 1e-14);
  const auto zero = minkowski_check(t, on(r, [](double) { return 0.0; }), 1.5);
  EXPECT_NEAR(zero.lhs, zero.rhs, 1e-15);
  EXPECT_NEAR(zero.lhs, lp_norm(t, 1.5), 1e-15);
}

TEST(Minkowski, CrudePowerBound) {
  auto eng = make_engine(23);
  const auto r = make_gauss_legendre(16);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> f(r->size()), g(r->size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = u(eng);
      g[i] = u(eng);
    }
    for (double p : {1.5, 2.0, 3.0}) {
      const auto q = [&](auto h) { return integrate_with(*r, [&](std::size_t i) { return std::pow(h(i), p); }); };
      const double lhs = q([&](std::size_t i) { return f[i] + g[i]; });
      const double rhs = std::pow(2.0, p) * (q([&](std::size_t i) { return f[i]; }) + q([&](std::size_t i) { return g[i]; }));
      EXPECT_LE(lhs, rhs);
      const auto m = minkowski_check(SampledFunction(r, f), SampledFunction(r, g), p);
      EXPECT_TRUE(m.holds());
    }
  }
}

TEST(NonnegPow, ZeroAndNonInteger) {
  EXPECT_EQ(nonneg_pow(0.0, 1.5), 0.0);
  EXPECT_NEAR(nonneg_pow(4.0, 1.5), 8.0, 1e-14);
  EXPECT_EQ(nonneg_pow(3.0, 2.0), 9.0);
}
