#include <gtest/gtest.h>

#include <random>

#include "gptlab/linalg.hpp"

using namespace gptlab;

TEST(Scalar, ParsesRationalLiterals) {
  EXPECT_EQ(parse_scalar<Rational>("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_scalar<Rational>("-7"), Rational(-7));
  EXPECT_DOUBLE_EQ(parse_scalar<double>("1/4"), 0.25);
  EXPECT_DOUBLE_EQ(parse_scalar<double>("0.125"), 0.125);
  EXPECT_THROW(parse_scalar<Rational>("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_scalar<Rational>("x"), std::invalid_argument);
  EXPECT_THROW(parse_scalar<double>("2/0"), std::invalid_argument);
}

TEST(Scalar, FloatComparisonsUseTolerance) {
  EXPECT_TRUE(is_zero(1e-10));
  EXPECT_FALSE(is_zero(1e-8));
  EXPECT_TRUE(approx_ge(1.0 - 1e-10, 1.0));
  EXPECT_FALSE(approx_ge(1.0 - 1e-8, 1.0));
  EXPECT_TRUE(is_zero(1e-6, Tolerance{1e-5}));
}

TEST(Scalar, ExactComparisonsIgnoreTolerance) {
  const Rational tiny(1, 1000000000);
  EXPECT_FALSE(is_zero(Rational(tiny / 10), Tolerance{1}));
  EXPECT_EQ(sign(Rational(-tiny)), -1);
}

TEST(Linalg, InverseTimesMatrixIsIdentityExactly) {
  const auto a = Matrix<Rational>::from_rows({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}});
  const auto inv = inverse(a);
  ASSERT_TRUE(inv.has_value());
  EXPECT_EQ(a * *inv, Matrix<Rational>::identity(3));
  EXPECT_EQ(determinant(a), Rational(18));
}

TEST(Linalg, SingularMatrixHasNoInverse) {
  const auto a = Matrix<double>::from_rows({{1, 2}, {2, 4}});
  EXPECT_FALSE(inverse(a).has_value());
  EXPECT_EQ(rank(a), 1u);
  const auto ns = null_space(a);
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_NEAR(max_abs(a * ns[0]), 0.0, 1e-12);
}

TEST(Linalg, RandomInversesRoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix<double> a(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) a(i, j) = u(rng) + (i == j ? 3 : 0);
    const auto inv = inverse(a);
    ASSERT_TRUE(inv.has_value());
    EXPECT_TRUE(approx_eq(a * *inv, Matrix<double>::identity(4), Tolerance{1e-12}));
  }
}

TEST(Linalg, NullSpaceOfWideRationalMatrix) {
  const auto a = Matrix<Rational>::from_rows({{1, 1, 1, 1}, {0, 1, 2, 3}});
  const auto ns = null_space(a);
  ASSERT_EQ(ns.size(), 2u);
  for (const auto& v : ns) EXPECT_EQ(a * v, zeros<Rational>(2));
}
