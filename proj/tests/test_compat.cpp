#include <gtest/gtest.h>

#include <cmath>

#include "gptlab/compat.hpp"
#include "gptlab/ideal.hpp"
#include "gptlab/uncertainty.hpp"

using namespace gptlab;

namespace {

template <Field S>
JointMeasurement<S> diagonal_joint(const Measurement<S>& f) {
  JointMeasurement<S> j;
  for (std::size_t a = 0; a < f.size(); ++a) {
    std::vector<Vec<S>> row;
    for (std::size_t b = 0; b < f.size(); ++b) row.push_back(a == b ? f.effects[a] : zeros<S>(f.effects[a].size()));
    j.grid.push_back(row);
  }
  return j;
}

// Re-validates an LP witness: marginals and vertex positivity.
void expect_witness_consistent(const Theory<double>& t, const JointMeasurement<double>& j,
                               const Measurement<double>& f, const Measurement<double>& g) {
  EXPECT_TRUE(validate_joint(t, j).ok) << validate_joint(t, j).failure;
  const auto [mf, mg] = marginals(j);
  for (std::size_t a = 0; a < f.size(); ++a) EXPECT_TRUE(approx_eq(mf.effects[a], f.effects[a], Tolerance{1e-8}));
  for (std::size_t b = 0; b < g.size(); ++b) EXPECT_TRUE(approx_eq(mg.effects[b], g.effects[b], Tolerance{1e-8}));
}

}  // namespace

TEST(Marginals, ProductAndUniformJoints) {
  const auto t = make_polygon(5);
  const auto f = enumerate_ideal_measurements(t, 2).front().measurement;
  const auto j = diagonal_joint(f);
  EXPECT_TRUE(validate_joint(t, j).ok);
  const auto [mf, mg] = marginals(j);
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_TRUE(approx_eq(mf.effects[a], f.effects[a]));
    EXPECT_TRUE(approx_eq(mg.effects[a], f.effects[a]));
  }
  JointMeasurement<double> uniform{{{0.25 * t.unit, 0.25 * t.unit}, {0.25 * t.unit, 0.25 * t.unit}}};
  const auto [uf, ug] = marginals(uniform);
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_TRUE(approx_eq(uf.effects[a], 0.5 * t.unit));
    EXPECT_TRUE(approx_eq(ug.effects[a], 0.5 * t.unit));
  }
}

TEST(Marginals, InvalidJointIsReported) {
  const auto t = make_polygon(4);
  JointMeasurement<double> neg{{{t.unit, -0.5 * t.unit}, {0.5 * t.unit, zeros<double>(3)}}};
  EXPECT_FALSE(validate_joint(t, neg).ok);
  JointMeasurement<double> short_sum{{{0.25 * t.unit, 0.25 * t.unit}, {0.25 * t.unit, 0.2 * t.unit}}};
  EXPECT_FALSE(validate_joint(t, short_sum).ok);
}

TEST(JointMeasurability, SelfPairIsCompatible) {
  for (int n : {3, 5, 4, 8}) {
    const auto t = n % 2 ? make_polygon(n) : psi_transform(make_polygon(n));
    for (const auto& im : enumerate_ideal_measurements(t, 3)) {
      const auto r = is_jointly_measurable(t, im.measurement, im.measurement);
      ASSERT_TRUE(r.compatible);
      expect_witness_consistent(t, *r.witness, im.measurement, im.measurement);
    }
  }
}

TEST(JointMeasurability, ClassicalPairsAreCompatibleExactly) {
  const auto t = make_classical<Rational>(2);
  const auto ms = enumerate_ideal_measurements(t, 3);
  for (const auto& a : ms)
    for (const auto& b : ms) {
      const auto r = is_jointly_measurable(t, a.measurement, b.measurement);
      ASSERT_TRUE(r.compatible);
      const auto [mf, mg] = marginals(*r.witness);
      for (std::size_t k = 0; k < a.measurement.size(); ++k) EXPECT_EQ(mf.effects[k], a.measurement.effects[k]);
      for (std::size_t k = 0; k < b.measurement.size(); ++k) EXPECT_EQ(mg.effects[k], b.measurement.effects[k]);
      EXPECT_TRUE(validate_joint(t, *r.witness).ok);
    }
}

TEST(JointMeasurability, SquarePerpendicularPairIsIncompatible) {
  const auto t = psi_transform(make_polygon(4));
  const auto [f, g] = perpendicular_ideal_pair(t);
  const auto r = is_jointly_measurable(t, f, g);
  EXPECT_FALSE(r.compatible);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(MinMur, Examples) {
  const auto t5 = make_polygon(5);
  const auto f5 = enumerate_ideal_measurements(t5, 2).front().measurement;
  EXPECT_NEAR(min_mur_linf(t5, f5, f5).value, 0.0, 1e-9);

  const auto t8 = psi_transform(make_polygon(8));
  const auto [f8, g8] = perpendicular_ideal_pair(t8);
  const auto r8 = min_mur_linf(t8, f8, g8);
  EXPECT_GE(r8.value, 1 - 1 / std::sqrt(2.0) - 1e-9);
  EXPECT_NEAR(r8.value, r8.t_f + r8.t_g, 1e-12);
  EXPECT_TRUE(validate_joint(t8, r8.joint).ok);
  // The reported slacks are the actual l-infinity errors of the optimizer.
  const auto [mf, mg] = marginals(r8.joint);
  EXPECT_NEAR(linf_distance(t8, mf, f8) + linf_distance(t8, mg, g8), r8.value, 1e-8);

  const auto t4 = psi_transform(make_polygon(4));
  const auto [f4, g4] = perpendicular_ideal_pair(t4);
  const auto r4 = min_mur_linf(t4, f4, g4);
  EXPECT_GE(r4.value, -1e-12);
  EXPECT_LE(r4.value, 0.5 + 1e-9);
  // The lambda = 1/2 fuzzified pair is jointly measurable and has D_inf sum exactly 1/2.
  const auto half = is_jointly_measurable(t4, fuzzify(f4, 0.5), fuzzify(g4, 0.5));
  ASSERT_TRUE(half.compatible);
  EXPECT_NEAR(linf_distance(t4, fuzzify(f4, 0.5), f4) + linf_distance(t4, fuzzify(g4, 0.5), g4), 0.5, 1e-12);
}

TEST(MinMur, BoundedBelowByMinLeSum) {
  for (int n : {3, 5, 7, 4, 8, 12}) {
    const auto t = n % 2 ? make_polygon(n) : psi_transform(make_polygon(n));
    const auto ms = enumerate_ideal_measurements(t, 2);
    for (std::size_t i = 0; i < ms.size(); ++i)
      for (std::size_t j = i; j < ms.size(); ++j) {
        const auto& f = ms[i].measurement;
        const auto& g = ms[j].measurement;
        EXPECT_GE(min_mur_linf(t, f, g).value, min_le_sum(t, f, g).value - 1e-9) << "n=" << n;
      }
  }
}

TEST(MaxFuzz, Examples) {
  const auto t5 = make_polygon(5);
  const auto f5 = enumerate_ideal_measurements(t5, 2).front().measurement;
  EXPECT_NEAR(max_fuzz_lambda(t5, f5, f5).lambda, 1.0, 1e-9);

  const auto t4 = psi_transform(make_polygon(4));
  const auto [f4, g4] = perpendicular_ideal_pair(t4);
  const auto r4 = max_fuzz_lambda(t4, f4, g4);
  EXPECT_NEAR(r4.lambda, 0.5, 1e-9);
  expect_witness_consistent(t4, r4.joint, fuzzify(f4, r4.lambda), fuzzify(g4, r4.lambda));

  const auto t8 = psi_transform(make_polygon(8));
  const auto [f8, g8] = perpendicular_ideal_pair(t8);
  const double lam8 = max_fuzz_lambda(t8, f8, g8).lambda;
  EXPECT_GE(lam8, 0.5 - 1e-9);
  EXPECT_LE(lam8, 1 / std::sqrt(2.0) + 1e-9);

  Measurement<double> three{{0.25 * t4.unit, 0.25 * t4.unit, 0.5 * t4.unit}, std::nullopt};
  EXPECT_THROW(max_fuzz_lambda(t4, three, f4), std::invalid_argument);
}

TEST(MaxFuzz, SandwichedBetweenHalfAndDegreeBound) {
  for (int n : {4, 8, 12, 16}) {
    const auto t = psi_transform(make_polygon(n));
    const auto [f, g] = perpendicular_ideal_pair(t);
    const double lam = max_fuzz_lambda(t, f, g).lambda;
    EXPECT_GE(lam, 0.5 - 1e-9) << "n=" << n;
    EXPECT_LE(lam, degree_bound_rhs(t, f, g) + 1e-9) << "n=" << n;
  }
}

TEST(MaxFuzz, ExactSquareThresholdInRationalCoordinates) {
  // Square with rational corners (+-1, 0), (0, +-1); its sharp effects are (+-x +- y + 1)/2.
  const auto t = make_theory<Rational>("square", {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}}, Vec<Rational>{0, 0, 1});
  const Rational h(1, 2);
  Measurement<Rational> f{{{h, h, h}, {-h, -h, h}}, std::nullopt};
  Measurement<Rational> g{{{-h, h, h}, {h, -h, h}}, std::nullopt};
  ASSERT_TRUE(validate_measurement(t, f).ok);
  ASSERT_TRUE(validate_measurement(t, g).ok);
  EXPECT_EQ(max_fuzz_lambda(t, f, g).lambda, h);
  EXPECT_EQ(degree_bound_rhs(t, f, g), 1);
}

TEST(DegreeBound, RhsMatchesClosedForm) {
  const std::vector<std::pair<int, double>> expected{
      {4, 1.0}, {8, 0.7071068}, {12, 0.7320508}, {16, 1 / std::sqrt(2.0)}};
  for (auto [n, v] : expected) {
    const auto t = psi_transform(make_polygon(n));
    const auto [f, g] = perpendicular_ideal_pair(t);
    EXPECT_NEAR(degree_bound_rhs(t, f, g), degree_bound_closed_form(n), 1e-9);
    EXPECT_NEAR(degree_bound_closed_form(n), v, 1e-7);
  }
  EXPECT_NEAR(degree_bound_closed_form(12), (1 / std::cos(M_PI / 12)) / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(degree_bound_closed_form(kPolygonInfinity), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(degree_bound_closed_form(6), std::invalid_argument);
  EXPECT_THROW(degree_bound_closed_form(0), std::invalid_argument);
}

TEST(MinMur, SolvesEveryIdealPairOnLargerPolygons) {
  // Regression: long pivot sequences used to drift into false infeasibility here.
  for (int n : {9, 11, 13, 14, 16}) {
    const auto t = n % 2 ? make_polygon(n) : psi_transform(make_polygon(n));
    const auto ms = enumerate_ideal_measurements(t, 3);
    for (const auto& a : ms)
      for (const auto& b : ms) {
        const auto r = min_mur_linf(t, a.measurement, b.measurement);
        EXPECT_GE(r.value, min_le_sum(t, a.measurement, b.measurement).value - 1e-9) << "n=" << n;
        EXPECT_TRUE(validate_joint(t, r.joint).ok) << "n=" << n;
      }
  }
}
