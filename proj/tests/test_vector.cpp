#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cbs/random.hpp"
#include "cbs/vector.hpp"

using namespace cbs;

namespace {

RealVector random_vector(Engine& eng, std::size_t n, double sd = 1.0) {
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = d(eng);
  return RealVector(v);
}

}  // namespace

TEST(RealVector, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(RealVector(std::vector<double>{}), DimensionError);
  EXPECT_THROW(RealVector({1.0, NAN}), DomainError);
  EXPECT_THROW(RealVector({INFINITY}), DomainError);
  EXPECT_THROW(RealVector::unit(3, 3), DimensionError);
}

TEST(InnerProduct, Examples) {
  EXPECT_DOUBLE_EQ(inner_product({1, 2, 3}, {4, 5, 6}), 32.0);
  EXPECT_EQ(inner_product({1.5, -2, 7}, RealVector::zeros(3)), 0.0);
  EXPECT_THROW(inner_product({1, 2}, {1, 2, 3}), DimensionError);
}

TEST(InnerProduct, AxiomsOnRandomTriples) {
  auto eng = make_engine(11);
  for (int t = 0; t < 200; ++t) {
    const auto x = random_vector(eng, 9), y = random_vector(eng, 9), z = random_vector(eng, 9);
    EXPECT_EQ(inner_product(x, y), inner_product(y, x));
    const double lhs = inner_product(x + y, z);
    const double rhs = inner_product(x, z) + inner_product(y, z);
    EXPECT_NEAR(lhs, rhs, 1e-12 * (norm(x) + norm(y)) * norm(z));
    EXPECT_NEAR(inner_product(2.5 * x, y), 2.5 * inner_product(x, y), 1e-12 * norm(x) * norm(y));
    EXPECT_GT(norm_squared(x), 0.0);
  }
}

TEST(Norm, Examples) {
  EXPECT_DOUBLE_EQ(norm({3, 4}), 5.0);
  EXPECT_EQ(norm(RealVector::zeros(5)), 0.0);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(norm(RealVector::unit(4, k)), 1.0);
}

TEST(CbsGap, Examples) {
  const auto orth = cbs_gap({1, 0}, {0, 1});
  EXPECT_DOUBLE_EQ(orth.gap, 1.0);
  EXPECT_FALSE(orth.equality);
  const auto col = cbs_gap({2, 4}, {1, 2});
  EXPECT_EQ(col.gap, 0.0);
  EXPECT_TRUE(col.equality);
  EXPECT_THROW(cbs_gap({1}, {1, 2}), DimensionError);
}

TEST(CbsGap, ZeroVectorIsEquality) {
  EXPECT_TRUE(cbs_gap(RealVector::zeros(3), {1, 2, 3}).equality);
  EXPECT_TRUE(cbs_gap({1, 2, 3}, RealVector::zeros(3)).equality);
}

TEST(CbsGap, MatchesLagrangeDoubleSum) {
  auto eng = make_engine(3);
  for (std::size_t n : {8u, 16u, 40u}) {
    const auto x = random_vector(eng, n), y = random_vector(eng, n);
    // independent expansion of the double sum
    double direct = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) direct += std::pow(x[i] * y[j] - x[j] * y[i], 2);
    const double scale = norm_squared(x) * norm_squared(y);
    EXPECT_NEAR(cbs_gap(x, y).gap, direct / 2.0, 1e-10 * scale);
    EXPECT_NEAR(lagrange_gap(x, y), direct, 1e-10 * scale);
  }
}

TEST(LagrangeGap, Examples) {
  EXPECT_DOUBLE_EQ(lagrange_gap({1, 2}, {3, 4}), 8.0);
  EXPECT_EQ(lagrange_gap({1, -2, 3}, {-2, 4, -6}), 0.0);
}

TEST(CbsGap, RandomizedNonnegativeAndDiscriminant) {
  auto eng = make_engine(5);
  std::uniform_int_distribution<std::size_t> len(1, 64);
  for (int t = 0; t < 100000; ++t) {
    const std::size_t n = len(eng);
    const auto x = random_vector(eng, n), y = random_vector(eng, n);
    const double xx = norm_squared(x), yy = norm_squared(y), xy = inner_product(x, y);
    const double scale = xx * yy;
    ASSERT_GE(cbs_gap(x, y).gap, -1e-12 * scale);
    ASSERT_GE(lagrange_gap(x, y), 0.0);
    const double ts = xy / yy;
    ASSERT_GE(yy * ts * ts - 2.0 * xy * ts + xx, -1e-12 * std::max(xx, 1.0));
  }
}

TEST(Angle, Examples) {
  const double pi = std::numbers::pi;
  EXPECT_NEAR(angle({1, 0}, {0, 1}), pi / 2, 1e-15);
  EXPECT_NEAR(angle({1, 0}, {1, 1}), pi / 4, 1e-15);
  const RealVector x{0.3, -1.2, 2.2};
  EXPECT_NEAR(angle(x, 3.0 * x), 0.0, 1e-7);
  EXPECT_NEAR(angle(x, -0.5 * x), pi, 1e-7);
  EXPECT_THROW(angle(x, RealVector::zeros(3)), DomainError);
}

TEST(Angle, EqualityFlagMatchesPoles) {
  auto eng = make_engine(8);
  const double pi = std::numbers::pi;
  for (int t = 0; t < 2000; ++t) {
    const auto x = random_vector(eng, 5);
    const bool collinear = t % 2 == 0;
    const auto y = collinear ? (t % 4 == 0 ? 1.7 : -0.4) * x : random_vector(eng, 5);
    const double th = angle(x, y);
    const double pole = std::min(th, pi - th);
    EXPECT_EQ(cbs_gap(x, y).equality, pole <= 1e-5) << "trial " << t;
    if (collinear) {
      EXPECT_TRUE(cbs_gap(x, y).equality);
    }
  }
}

TEST(TriangleCheck, Examples) {
  const auto r = triangle_check({1, 0}, {0, 1});
  EXPECT_DOUBLE_EQ(r.lhs, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(r.rhs, 2.0);
  const auto z = triangle_check({1, 2, 2}, RealVector::zeros(3));
  EXPECT_EQ(z.lhs, z.rhs);
  auto eng = make_engine(9);
  for (int t = 0; t < 1000; ++t) {
    const auto c = triangle_check(random_vector(eng, 6), random_vector(eng, 6));
    EXPECT_LE(c.lhs, c.rhs + 1e-14 * c.rhs);
  }
  EXPECT_THROW(triangle_check({1}, {1, 1}), DimensionError);
}

TEST(MeanChain, Examples) {
  const auto m = mean_chain({1, 2, 4});
  EXPECT_DOUBLE_EQ(m.am, 7.0 / 3.0);
  EXPECT_NEAR(m.gm, 2.0, 1e-15);
  ASSERT_TRUE(m.hm);
  EXPECT_DOUBLE_EQ(*m.hm, 12.0 / 7.0);
  const auto c = mean_chain(RealVector::constant(6, 2.5));
  EXPECT_NEAR(c.am, 2.5, 1e-15);
  EXPECT_NEAR(c.gm, 2.5, 1e-15);
  EXPECT_NEAR(*c.hm, 2.5, 1e-15);
}

TEST(MeanChain, ZerosAndNegatives) {
  const auto m = mean_chain({0, 2, 4});
  EXPECT_EQ(m.gm, 0.0);
  EXPECT_FALSE(m.hm);
  EXPECT_THROW(harmonic_mean({0, 2}), DomainError);
  EXPECT_THROW(mean_chain({1, -1}), DomainError);
}

TEST(MeanChain, LogDomainAvoidsOverflow) {
  const auto m = mean_chain(RealVector::constant(400, 1e300));
  EXPECT_NEAR(m.gm / 1e300, 1.0, 1e-12);
}

TEST(MeanChain, RandomOrdering) {
  auto eng = make_engine(10);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> v(10);
    for (auto& x : v) x = u(eng);
    const auto m = mean_chain(RealVector(v));
    EXPECT_GT(m.am, m.gm);
    EXPECT_GT(m.gm, *m.hm);
  }
}
