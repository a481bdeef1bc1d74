#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "gptlab/symmetry.hpp"
#include "oracles.hpp"

using namespace gptlab;

namespace {

template <Field S>
std::set<std::vector<std::size_t>> perms_of(const SymmetryGroup<S>& g) {
  std::set<std::vector<std::size_t>> s;
  for (const auto& e : g.elements) s.insert(e.perm);
  return s;
}

template <Field S>
std::set<std::vector<std::size_t>> brute_force_perms(const Theory<S>& t) {
  std::vector<oracle::LVec> verts;
  for (const auto& v : t.vertices) {
    oracle::LVec l;
    for (const auto& x : v) l.push_back(to_double(x));
    verts.push_back(l);
  }
  // First spanning subset in index order.
  std::vector<std::size_t> basis;
  std::vector<Vec<double>> picked;
  for (std::size_t i = 0; i < t.num_vertices() && basis.size() < t.dim(); ++i) {
    picked.push_back(to_double(t.vertices[i]));
    if (rank_of(picked) == picked.size()) {
      basis.push_back(i);
    } else {
      picked.pop_back();
    }
  }
  const auto found = oracle::linear_permutations(verts, basis);
  return {found.begin(), found.end()};
}

Theory<double> stretched_pentagon() {
  const auto p = make_polygon(5);
  std::vector<Vec<double>> vs;
  for (const auto& v : p.vertices) vs.push_back({2 * v[0], 2 * v[1], v[2]});
  return make_theory<double>("stretched-pentagon", vs, p.unit);
}

Theory<Rational> kite() {
  return make_theory<Rational>("kite", {{2, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}}, Vec<Rational>{0, 0, 1});
}

Theory<Rational> rhombus() {
  return make_theory<Rational>("rhombus", {{2, 0, 1}, {0, 1, 1}, {-2, 0, 1}, {0, -1, 1}}, Vec<Rational>{0, 0, 1});
}

}  // namespace

TEST(Automorphisms, ClosedFormOrders) {
  EXPECT_EQ(automorphism_group(make_polygon(5)).order(), 10u);
  EXPECT_EQ(automorphism_group(make_classical<Rational>(2)).order(), 6u);
  EXPECT_EQ(automorphism_group(make_classical<Rational>(3)).order(), 24u);
}

TEST(Automorphisms, SearchMatchesBruteForceAndClosedForm) {
  for (int n = 3; n <= 8; ++n) {
    const auto t = make_polygon(n);
    const auto searched = perms_of(automorphism_group_search(t));
    EXPECT_EQ(searched, perms_of(automorphism_group(t))) << "n=" << n;
    EXPECT_EQ(searched, brute_force_perms(t)) << "n=" << n;
  }
  for (int level = 1; level <= 3; ++level) {
    const auto t = make_classical<Rational>(level);
    const auto searched = perms_of(automorphism_group_search(t));
    EXPECT_EQ(searched, perms_of(automorphism_group(t)));
    EXPECT_EQ(searched, brute_force_perms(t));
  }
}

TEST(Automorphisms, SerialAndParallelSearchAgree) {
  for (int n : {6, 9, 12}) {
    const auto t = make_polygon(n);
    const auto a = automorphism_group_search(t, Exec::serial);
    const auto b = automorphism_group_search(t, Exec::parallel);
    ASSERT_EQ(a.order(), b.order());
    for (std::size_t k = 0; k < a.order(); ++k) EXPECT_EQ(a.elements[k].perm, b.elements[k].perm);
  }
}

TEST(Automorphisms, KiteIsNotTransitive) {
  const auto t = kite();
  const auto g = automorphism_group(t);
  EXPECT_EQ(perms_of(g), brute_force_perms(t));
  EXPECT_EQ(g.order(), 2u);
  EXPECT_FALSE(is_transitive(g, t.num_vertices()));
  EXPECT_THROW(maximally_mixed(t, g), TheoryError);
}

TEST(Automorphisms, RhombusIsLinearlyASquare) {
  // A rhombus is the linear image of a square, so its linear automorphism group is dihedral of
  // order 8 and acts transitively; (x, y, z) -> (2y, x/2, z) swaps the axes.
  const auto t = rhombus();
  const auto g = automorphism_group(t);
  EXPECT_EQ(perms_of(g), brute_force_perms(t));
  EXPECT_EQ(g.order(), 8u);
  EXPECT_TRUE(is_transitive(g, t.num_vertices()));
  EXPECT_TRUE(is_closed(g));
}

TEST(Automorphisms, GroupIsClosedAndStartsWithIdentity) {
  for (int n : {3, 4, 7}) {
    const auto g = automorphism_group(make_polygon(n));
    EXPECT_TRUE(is_closed(g));
    EXPECT_TRUE(approx_eq(g.elements.front().matrix, Matrix<double>::identity(3)));
  }
  EXPECT_TRUE(is_closed(automorphism_group(make_classical<Rational>(3))));
}

TEST(Automorphisms, NonSpanningVerticesThrow) {
  Theory<double> t = make_polygon(4);
  t.kind = TheoryKind::user;
  t.vertices = {{1, 0, 1}, {-1, 0, 1}};
  EXPECT_THROW(automorphism_group_search(t), TheoryError);
}

TEST(MaximallyMixed, Examples) {
  for (int n : {3, 6, 9}) {
    const auto t = make_polygon(n);
    const auto g = automorphism_group(t);
    const auto wm = maximally_mixed(t, g);
    EXPECT_TRUE(approx_eq(wm, Vec<double>{0, 0, 1}, Tolerance{1e-12}));
    for (const auto& e : g.elements) EXPECT_LT(max_abs(e.matrix * wm - wm), 1e-12);
  }
  const auto c = make_classical<Rational>(2);
  EXPECT_EQ(maximally_mixed(c, automorphism_group(c)), (Vec<Rational>{Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
}

TEST(Rescale, UnitNorm) {
  const auto p = make_polygon(5);
  const auto rp = rescale_unit_norm(p, automorphism_group(p));
  for (std::size_t i = 0; i < p.num_vertices(); ++i)
    EXPECT_TRUE(approx_eq(rp.vertices[i], p.vertices[i], Tolerance{1e-12}));

  const auto c = to_double(make_classical<Rational>(2));
  const auto rc = rescale_unit_norm(c, automorphism_group(c));
  EXPECT_NEAR(rc.vertices[0][0], std::sqrt(3.0), 1e-12);
  for (const auto& v : rc.vertices) EXPECT_NEAR(dot(rc.unit, v), 1.0, 1e-12);
  const auto twice = rescale_unit_norm(rc, automorphism_group(rc));
  for (std::size_t i = 0; i < rc.num_vertices(); ++i)
    EXPECT_TRUE(approx_eq(twice.vertices[i], rc.vertices[i], Tolerance{1e-12}));
}

TEST(AveragedInnerProduct, IdentityForBuiltIns) {
  for (int n = 3; n <= 12; ++n)
    EXPECT_LT(max_abs(averaged_inner_product(automorphism_group(make_polygon(n))) - Matrix<double>::identity(3)),
              1e-12);
  for (int level = 1; level <= 3; ++level) {
    const auto t = make_classical<Rational>(level);
    EXPECT_EQ(averaged_inner_product(automorphism_group(t)), Matrix<Rational>::identity(t.dim()));
  }
  SymmetryGroup<Rational> trivial{{{Matrix<Rational>::identity(2), {0, 1}}}};
  EXPECT_EQ(averaged_inner_product(trivial), Matrix<Rational>::identity(2));
}

TEST(AveragedInnerProduct, MakesEveryAutomorphismOrthogonal) {
  for (const auto& t : {stretched_pentagon(), to_double(rhombus())}) {
    const auto g = automorphism_group(t);
    const auto a = averaged_inner_product(g);
    for (const auto& e : g.elements) EXPECT_LT(max_abs(e.matrix.transpose() * a * e.matrix - a), 1e-12);
    // Equal averaged norms on all vertices.
    const double n0 = gram_inner(a, t.vertices[0], t.vertices[0]);
    for (const auto& v : t.vertices) EXPECT_NEAR(gram_inner(a, v, v), n0, 1e-12);
  }
}

TEST(ProjectorPm, Examples) {
  const auto t = make_polygon(6);
  const auto p = projector_pm(automorphism_group(t));
  EXPECT_LT(max_abs(p - Matrix<double>::diagonal({0, 0, 1})), 1e-12);
  EXPECT_LT(max_abs(p * Vec<double>{0, 0, 1} - Vec<double>{0, 0, 1}), 1e-12);
  EXPECT_LT(max_abs(p * (t.vertices[2] - Vec<double>{0, 0, 1})), 1e-12);
}

TEST(ProjectorPm, IdempotentAndSelfAdjoint) {
  const auto t = stretched_pentagon();
  const auto g = automorphism_group(t);
  const auto p = projector_pm(g);
  const auto a = averaged_inner_product(g);
  EXPECT_LT(max_abs(p * p - p), 1e-12);
  EXPECT_LT(max_abs(p.transpose() * a - a * p), 1e-12);
}

TEST(Canonicalize, PolygonIsAlreadyCanonical) {
  const auto t = make_polygon(7);
  const auto c = canonicalize(t);
  EXPECT_TRUE(c.theory.canonicalized);
  EXPECT_TRUE(approx_eq(c.theory.unit, Vec<double>{0, 0, 1}, Tolerance{1e-12}));
  for (std::size_t i = 0; i < t.num_vertices(); ++i) {
    // Rotation in the plane only: radius and height are preserved.
    EXPECT_NEAR(std::hypot(c.theory.vertices[i][0], c.theory.vertices[i][1]), polygon_radius(7), 1e-12);
    EXPECT_NEAR(c.theory.vertices[i][2], 1.0, 1e-12);
  }
  // First basis vector is aligned with vertex 0 - w_M.
  EXPECT_NEAR(c.theory.vertices[0][1], 0.0, 1e-12);
  EXPECT_GT(c.theory.vertices[0][0], 0.0);
}

TEST(Canonicalize, ClassicalBit) {
  const auto c = canonicalize(to_double(make_classical<Rational>(1)));
  ASSERT_EQ(c.theory.num_vertices(), 2u);
  EXPECT_TRUE(approx_eq(c.theory.vertices[0], Vec<double>{1, 1}, Tolerance{1e-12}));
  EXPECT_TRUE(approx_eq(c.theory.vertices[1], Vec<double>{-1, 1}, Tolerance{1e-12}));
  EXPECT_TRUE(approx_eq(c.theory.unit, Vec<double>{0, 1}, Tolerance{1e-12}));
}

TEST(Canonicalize, BasisAndBlochForm) {
  for (const auto& t : {to_double(make_classical<Rational>(3)), stretched_pentagon(), to_double(rhombus())}) {
    const auto g = automorphism_group(t);
    const auto a = averaged_inner_product(g);
    const auto c = canonicalize(t);
    // Rescaling leaves the group, hence the averaged product, unchanged; every automorphism
    // fixes w_M, so its averaged norm is its Euclidean norm, 1.
    const auto bgb = c.basis.transpose() * a * c.basis;
    EXPECT_LT(max_abs(bgb - Matrix<double>::identity(t.dim())), 1e-12);
    for (const auto& v : c.theory.vertices) EXPECT_NEAR(v.back(), 1.0, 1e-12);
    const auto wm = maximally_mixed(c.theory, automorphism_group(c.theory));
    EXPECT_TRUE(approx_eq(c.theory.unit, wm, Tolerance{1e-9}));
    EXPECT_NEAR(std::sqrt(dot(wm, wm)), 1.0, 1e-12);
    // Probabilities are preserved by the coordinate change.
    const Vec<double> e = 0.25 * t.unit;
    for (std::size_t i = 0; i < t.num_vertices(); ++i)
      EXPECT_NEAR(dot(to_canonical_effect(c, e), c.theory.vertices[i]), pair(t, e, t.vertices[i]), 1e-12);
  }
}

TEST(Canonicalize, NonTransitiveThrows) { EXPECT_THROW(canonicalize(to_double(kite())), TheoryError); }

TEST(SelfDual, Examples) {
  EXPECT_TRUE(is_self_dual(make_polygon(5)));
  EXPECT_FALSE(is_self_dual(make_polygon(4)));
  for (int level = 1; level <= 3; ++level) EXPECT_TRUE(is_self_dual(make_classical<Rational>(level)));
  for (int n : {3, 5, 7, 9}) EXPECT_TRUE(is_self_dual(make_polygon(n)));
  for (int n : {4, 6, 8, 10}) EXPECT_FALSE(is_self_dual(make_polygon(n)));
}

TEST(Xi, IdentityOnSelfDualInputs) {
  for (const auto& t : {make_polygon(5), canonicalize(to_double(make_classical<Rational>(2))).theory}) {
    const auto r = xi_canonicalize(t, Matrix<double>::identity(t.dim()));
    EXPECT_LT(max_abs(r.xi_map - Matrix<double>::identity(t.dim())), 1e-12);
    EXPECT_NEAR(r.xi, 1.0, 1e-12);
    for (std::size_t i = 0; i < t.num_vertices(); ++i)
      EXPECT_TRUE(approx_eq(r.theory.vertices[i], t.vertices[i], Tolerance{1e-12}));
  }
}

TEST(Xi, RecoversSelfDualStretchedPentagon) {
  const auto t = stretched_pentagon();
  EXPECT_FALSE(is_self_dual(t));
  const auto r = xi_canonicalize(t, Matrix<double>::diagonal({0.25, 0.25, 1}));
  EXPECT_LE(r.eigen_spread, 1e-7);
  EXPECT_TRUE(is_self_dual(r.theory, averaged_inner_product(automorphism_group(r.theory))));
}

TEST(Xi, RejectsInvalidJ) {
  const auto t = make_polygon(5);
  EXPECT_THROW(xi_canonicalize(t, Matrix<double>::from_rows({{1, 0.5, 0}, {0, 1, 0}, {0, 0, 1}})),
               std::invalid_argument);
  EXPECT_THROW(xi_canonicalize(t, Matrix<double>::diagonal({1, 1, -1})), std::invalid_argument);
  // Positive definite but mapping the cone outside its dual.
  EXPECT_THROW(xi_canonicalize(t, Matrix<double>::diagonal({5, 5, 1})), std::invalid_argument);
}
