#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gptlab/ideal.hpp"
#include "gptlab/symmetry.hpp"
#include "gptlab/uncertainty.hpp"
#include "oracles.hpp"

using namespace gptlab;

namespace {

FiniteMetricSpace<double> two_points(double d) {
  return FiniteMetricSpace<double>({"0", "1"}, Matrix<double>::from_rows({{0, d}, {d, 0}}));
}

Measurement<double> with_metric(Measurement<double> m, const FiniteMetricSpace<double>& s) {
  m.metric = s;
  return m;
}

}  // namespace

TEST(Metric, Validation) {
  EXPECT_THROW(FiniteMetricSpace<double>({"a", "b"}, Matrix<double>::from_rows({{0, 1}, {2, 0}})),
               std::invalid_argument);
  EXPECT_THROW(FiniteMetricSpace<double>({"a", "b"}, Matrix<double>::from_rows({{0, 0}, {0, 0}})),
               std::invalid_argument);
  EXPECT_THROW(FiniteMetricSpace<double>({"a", "b", "c"},
                                         Matrix<double>::from_rows({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}})),
               std::invalid_argument);
  EXPECT_NO_THROW(FiniteMetricSpace<double>::line(4));
  EXPECT_EQ(FiniteMetricSpace<Rational>::line(3)(0, 2), 2);
}

TEST(OverallWidth, Examples) {
  const auto m = two_points(1);
  EXPECT_EQ(overall_width(OutcomeDistribution<double>({1, 0}, m), 0.0), 0.0);
  EXPECT_EQ(overall_width(OutcomeDistribution<double>({0.5, 0.5}, m), 0.3), 2.0);
  EXPECT_EQ(overall_width(OutcomeDistribution<double>({0.5, 0.5}, m), 1.0), 0.0);
  EXPECT_EQ(overall_width(OutcomeDistribution<double>({0.5, 0.5}, m), 0.5), 0.0);
  EXPECT_THROW(overall_width(OutcomeDistribution<double>({0.5, 0.5}, m), 1.5), std::invalid_argument);
  EXPECT_THROW(OutcomeDistribution<double>({0.5, 0.6}, m), std::invalid_argument);
  EXPECT_THROW(OutcomeDistribution<double>({1.5, -0.5}, m), std::invalid_argument);
}

TEST(OverallWidth, MatchesGridScanAndIsMonotone) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    // Random points on a line give a valid metric.
    const std::size_t k = 2 + trial % 4;
    std::vector<double> pos(k), p(k);
    double s = 0;
    for (std::size_t i = 0; i < k; ++i) {
      pos[i] = std::round(8 * u(rng)) / 4 + static_cast<double>(i) * 1e-3;
      p[i] = u(rng);
      s += p[i];
    }
    Matrix<double> d(k, k);
    std::vector<oracle::LVec> ld(k, oracle::LVec(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        d(i, j) = std::abs(pos[i] - pos[j]);
        ld[i][j] = d(i, j);
      }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i) labels.push_back(std::to_string(i));
    std::vector<long double> lp(k);
    for (std::size_t i = 0; i < k; ++i) lp[i] = p[i] /= s;
    const OutcomeDistribution<double> dist(p, FiniteMetricSpace<double>(labels, d));
    double prev = 1e300;
    for (double eps : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9}) {
      const double w = overall_width(dist, eps);
      const auto scanned = static_cast<double>(oracle::scanned_width(lp, ld, eps, 1e-4L, 10));
      EXPECT_LE(w, scanned + 1e-12);
      EXPECT_GE(w, scanned - 1e-4 - 1e-12);
      EXPECT_LE(w, prev);
      prev = w;
    }
  }
}

TEST(LocalizationError, Examples) {
  EXPECT_EQ(localization_error(std::vector<double>{0, 1, 0}), 0.0);
  EXPECT_NEAR(localization_error(std::vector<double>{0.25, 0.25, 0.25, 0.25}), 0.75, 1e-15);
  const auto t = psi_transform(make_polygon(8));
  const auto f = perpendicular_ideal_pair(t).first;
  // The vertex at angle pi/8 is not a psi-rep vertex; the eigenstate of the pi/8 effect is.
  const auto w = eigenstate(t, f.effects[0], true);
  EXPECT_NEAR(localization_error(probabilities(t, f, w)), 0.0, 1e-12);
}

TEST(Distribution, Examples) {
  const auto t3 = make_polygon(3);
  Measurement<double> noise{{0.5 * t3.unit, 0.5 * t3.unit}, std::nullopt};
  const auto d = distribution(t3, noise, t3.vertices[1]);
  EXPECT_NEAR(d.probs[0], 0.5, 1e-15);
  Measurement<double> fine{indecomposable_pure_effects(t3), std::nullopt};
  const auto df = distribution(t3, fine, t3.vertices[0]);
  EXPECT_NEAR(df.probs[0], 1, 1e-12);
  EXPECT_NEAR(df.probs[1], 0, 1e-12);
  EXPECT_NEAR(df.probs[2], 0, 1e-12);
  EXPECT_THROW(distribution(t3, fine, Vec<double>{3, 0, 1}), TheoryError);

  const auto f = enumerate_ideal_measurements(t3, 2).front().measurement;
  const auto w = eigenstate(t3, f.effects[0], true);
  const auto dz = distribution(t3, fuzzify(f, 0.3), w);
  EXPECT_NEAR(dz.probs[0], 0.3 + 0.35, 1e-12);
  EXPECT_NEAR(dz.probs[1], 0.35, 1e-12);
}

TEST(ErrorBarWidth, FuzzifiedBinaryThreshold) {
  for (int n : {3, 4, 5, 8}) {
    const auto t = n % 2 ? make_polygon(n) : psi_transform(make_polygon(n));
    const auto f = enumerate_ideal_measurements(t, 2).front().measurement;
    EXPECT_EQ(error_bar_width(t, f, f, 0.0), 0.0);
    for (double lam : {0.2, 0.6}) {
      const auto ft = fuzzify(f, lam);
      const double deficit = (1 - lam) / 2;
      EXPECT_EQ(error_bar_width(t, ft, f, deficit + 0.01), 0.0);
      EXPECT_EQ(error_bar_width(t, ft, f, deficit - 0.01), 2.0);
      EXPECT_EQ(error_bar_width(t, ft, f, 1.0), 0.0);
    }
  }
}

TEST(ErrorBarWidth, ZeroForIdealMeasurementsAgainstThemselves) {
  for (int n : {3, 5, 4, 6}) {
    const auto t = n % 2 ? make_polygon(n) : psi_transform(make_polygon(n));
    for (const auto& im : enumerate_ideal_measurements(t, 3)) {
      auto m = im.measurement;
      if (m.size() > 2) m.metric = FiniteMetricSpace<double>::line(m.size());
      EXPECT_EQ(error_bar_width(t, m, m, 0.0), 0.0);
    }
  }
}

TEST(ErrorBarWidth, EmptyEigenstateFaceIsAnError) {
  // A fuzzified effect never reaches 1, so no vertex lies on its eigenstate face.
  const auto t = make_polygon(5);
  const auto f = enumerate_ideal_measurements(t, 2).front().measurement;
  const auto soft = fuzzify(f, 0.6);
  EXPECT_THROW(error_bar_width(t, f, soft, 0.1), TheoryError);
}

TEST(Werner, ClosedFormForFuzzifiedBinary) {
  for (int n : {3, 4, 5, 8, 12}) {
    const auto t = n % 2 ? make_polygon(n) : psi_transform(make_polygon(n));
    for (const auto& im : enumerate_ideal_measurements(t, 2)) {
      for (double lam : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto ft = fuzzify(im.measurement, lam);
        EXPECT_NEAR(werner_distance(t, ft, im.measurement), (1 - lam) / 2, 1e-9);
        // Dilating the metric dilates the distance.
        EXPECT_NEAR(werner_distance(t, with_metric(ft, two_points(3)), with_metric(im.measurement, two_points(3))),
                    3 * (1 - lam) / 2, 1e-9);
      }
    }
  }
}

TEST(Werner, VanishesOnlyOnEqualMeasurements) {
  const auto t = make_polygon(5);
  const auto ms = enumerate_ideal_measurements(t, 2);
  EXPECT_NEAR(werner_distance(t, ms[0].measurement, ms[0].measurement), 0.0, 1e-12);
  EXPECT_GT(werner_distance(t, ms[1].measurement, ms[0].measurement), 1e-3);
}

TEST(Werner, SerialAndParallelAgree) {
  const auto t = make_disc_approx(64);
  Measurement<double> f{{even_polygon_effect(64, 0), even_polygon_effect(64, 32)}, std::nullopt};
  Measurement<double> g{{even_polygon_effect(64, 5), even_polygon_effect(64, 37)}, std::nullopt};
  const auto approx = fuzzify(g, 0.7);
  EXPECT_EQ(werner_distance(t, approx, f, Exec::serial), werner_distance(t, approx, f, Exec::parallel));
}

TEST(Werner, ExactModeOnClassical) {
  const auto t = make_classical<Rational>(2);
  const auto ms = enumerate_ideal_measurements(t, 3);
  for (const auto& im : ms) {
    if (im.measurement.size() != 2) continue;
    const auto ft = fuzzify(im.measurement, Rational(1, 3));
    EXPECT_EQ(werner_distance(t, ft, im.measurement), Rational(1, 3));
    EXPECT_EQ(linf_distance(t, ft, im.measurement), Rational(1, 3));
  }
}

TEST(Linf, Examples) {
  const auto t = psi_transform(make_polygon(4));
  const auto f = perpendicular_ideal_pair(t).first;
  EXPECT_NEAR(linf_distance(t, f, f), 0.0, 1e-15);
  EXPECT_NEAR(linf_distance(t, fuzzify(f, 0.4), f), 0.3, 1e-12);
  Measurement<double> noise{{0.5 * t.unit, 0.5 * t.unit}, std::nullopt};
  EXPECT_NEAR(linf_distance(t, noise, f), 0.5, 1e-12);
  Measurement<double> three{{0.25 * t.unit, 0.25 * t.unit, 0.5 * t.unit}, std::nullopt};
  EXPECT_THROW(linf_distance(t, three, f), std::invalid_argument);
}

TEST(MinLeSum, Examples) {
  const auto c = make_classical<Rational>(2);
  const auto ms = enumerate_ideal_measurements(c, 3);
  for (const auto& a : ms)
    for (const auto& b : ms) EXPECT_EQ(min_le_sum(c, a.measurement, b.measurement).value, 0);

  const auto t8 = psi_transform(make_polygon(8));
  const auto [f8, g8] = perpendicular_ideal_pair(t8);
  EXPECT_NEAR(min_le_sum(t8, f8, g8).value, 1 - 1 / std::sqrt(2.0), 1e-9);

  const auto t12 = psi_transform(make_polygon(12));
  const auto [f12, g12] = perpendicular_ideal_pair(t12);
  EXPECT_NEAR(min_le_sum(t12, f12, g12).value, 0.267949, 1e-6);
}

TEST(MinLeSum, MatchesDenseBoundarySampling) {
  // Independent oracle: sample the polygon boundary densely with plain trig and minimize
  // LE(F) + LE(G) for the half-angle effects at angles a and a + pi/2.
  for (int n : {8, 12, 16, 20}) {
    const auto t = psi_transform(make_polygon(n));
    const auto [f, g] = perpendicular_ideal_pair(t);
    const double r2 = 1 / std::cos(M_PI / n);
    const double a = M_PI / n, b = a + M_PI / 2;
    double best = 1e300;
    for (int k = 0; k < n; ++k) {
      const double th0 = 2 * M_PI * k / n, th1 = 2 * M_PI * (k + 1) / n;
      for (int s = 0; s <= 200; ++s) {
        const double lam = s / 200.0;
        const double x = r2 * ((1 - lam) * std::cos(th0) + lam * std::cos(th1));
        const double y = r2 * ((1 - lam) * std::sin(th0) + lam * std::sin(th1));
        const double pf = 0.5 * (1 + x * std::cos(a) + y * std::sin(a));
        const double pg = 0.5 * (1 + x * std::cos(b) + y * std::sin(b));
        best = std::min(best, (1 - std::max(pf, 1 - pf)) + (1 - std::max(pg, 1 - pg)));
      }
    }
    EXPECT_NEAR(min_le_sum(t, f, g).value, best, 1e-12) << "n=" << n;
  }
}
