#include "gptlab/model.hpp"

#include <cmath>
#include <numbers>

#include "gptlab/lp.hpp"

namespace gptlab {

std::string to_string(TheoryKind k) {
  switch (k) {
    case TheoryKind::user: return "user";
    case TheoryKind::classical: return "classical";
    case TheoryKind::polygon: return "polygon";
    case TheoryKind::disc_approx: return "disc_approx";
    case TheoryKind::psi_polygon: return "psi_polygon";
  }
  return "?";
}

namespace {

// Is p a convex combination of `pts`?
template <Field S>
bool in_hull(const std::vector<Vec<S>>& pts, const Vec<S>& p, Tolerance tol) {
  const std::size_t m = pts.size();
  if (m == 0) return false;
  LinearProgram<S> lp(m);
  lp.all_nonnegative();
  for (std::size_t i = 0; i < p.size(); ++i) {
    Vec<S> row(m);
    for (std::size_t j = 0; j < m; ++j) row[j] = pts[j][i];
    lp.add(std::move(row), Relation::eq, p[i]);
  }
  lp.add(Vec<S>(m, S(1)), Relation::eq, S(1));
  return lp_feasible(lp, tol).has_value();
}

}  // namespace

template <Field S>
Theory<S> make_theory(std::string name, std::vector<Vec<S>> vertices, Vec<S> unit,
                      std::optional<InnerProduct<S>> inner, Tolerance tol) {
  if (vertices.empty()) throw TheoryError("theory has no vertices");
  const std::size_t d = unit.size();
  if (d < 1) throw TheoryError("unit effect is empty");
  for (const auto& v : vertices)
    if (v.size() != d) throw TheoryError("vertex dimension does not match the unit effect");
  if (!inner) inner = InnerProduct<S>::euclidean(d);
  if (inner->dim() != d) throw TheoryError("inner product dimension does not match the unit effect");

  Theory<S> t;
  t.name = std::move(name);
  t.unit = std::move(unit);
  t.inner = std::move(*inner);
  t.tol = tol;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!approx_eq<S>(t.inner(t.unit, vertices[i]), S(1), tol))
      throw TheoryError("unit effect does not evaluate to 1 on vertex " + std::to_string(i));
  }
  const auto hull = affine_hull_check(vertices, tol);
  if (!hull.origin_outside) throw TheoryError("origin lies in the affine hull of the vertices");
  if (hull.affine_dim + 1 != d) throw TheoryError("vertices do not span the ambient space");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    std::vector<Vec<S>> others;
    for (std::size_t j = 0; j < vertices.size(); ++j)
      if (j != i) others.push_back(vertices[j]);
    if (in_hull(others, vertices[i], tol))
      throw TheoryError("vertex " + std::to_string(i) + " is not extreme");
  }
  t.vertices = std::move(vertices);
  t.cone = ConeV<S>{t.vertices, 0};
  return t;
}

template <Field S>
Theory<S> make_classical(int n) {
  if (n < 1) throw std::invalid_argument("classical theory needs N >= 1");
  const std::size_t d = static_cast<std::size_t>(n) + 1;
  std::vector<Vec<S>> verts;
  for (std::size_t i = 0; i < d; ++i) {
    Vec<S> e = zeros<S>(d);
    e[i] = S(1);
    verts.push_back(std::move(e));
  }
  auto t = make_theory<S>("classical-" + std::to_string(n), std::move(verts), Vec<S>(d, S(1)));
  t.kind = TheoryKind::classical;
  t.param = n;
  return t;
}

double polygon_radius(int n) {
  if (n < 3) throw std::invalid_argument("polygon needs n >= 3");
  return std::sqrt(1.0 / std::cos(std::numbers::pi / n));
}

Theory<double> make_polygon(int n) {
  const double r = polygon_radius(n);
  std::vector<Vec<double>> verts;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    verts.push_back({r * std::cos(a), r * std::sin(a), 1.0});
  }
  auto t = make_theory<double>("polygon-" + std::to_string(n), std::move(verts), {0.0, 0.0, 1.0});
  t.kind = TheoryKind::polygon;
  t.param = n;
  return t;
}

Theory<double> make_disc_approx(int m) {
  if (m < 8) throw std::invalid_argument("disc approximation needs m >= 8");
  auto t = make_polygon(m);
  t.name = "disc-approx-" + std::to_string(m);
  t.kind = TheoryKind::disc_approx;
  return t;
}

Theory<double> to_double(const Theory<Rational>& t) {
  Theory<double> d;
  d.name = t.name;
  d.kind = t.kind;
  d.param = t.param;
  for (const auto& v : t.vertices) d.vertices.push_back(to_double(v));
  d.unit = to_double(t.unit);
  d.inner = InnerProduct<double>(to_double(t.inner.gram()));
  d.cone = ConeV<double>{d.vertices, 0};
  d.canonicalized = t.canonicalized;
  d.tol = t.tol;
  return d;
}

Measurement<double> to_double(const Measurement<Rational>& m) {
  Measurement<double> d;
  for (const auto& e : m.effects) d.effects.push_back(to_double(e));
  if (m.metric) d.metric = FiniteMetricSpace<double>(m.metric->labels(), to_double(m.metric->matrix()));
  return d;
}

template <Field S>
S pair(const Theory<S>& t, const Vec<S>& e, const Vec<S>& w) {
  return t.inner(e, w);
}

template <Field S>
bool in_state_space(const Theory<S>& t, const Vec<S>& w) {
  if (w.size() != t.dim()) throw std::invalid_argument("state dimension mismatch");
  return in_hull(t.vertices, w, t.tol);
}

template <Field S>
S effect_eval(const Theory<S>& t, const Vec<S>& e, const Vec<S>& w) {
  if (e.size() != t.dim()) throw std::invalid_argument("effect dimension mismatch");
  if (!in_state_space(t, w)) throw TheoryError("point is not in the state space");
  return pair(t, e, w);
}

template <Field S>
bool is_valid_effect(const Theory<S>& t, const Vec<S>& e) {
  if (e.size() != t.dim()) return false;
  for (const auto& v : t.vertices) {
    S x = pair(t, e, v);
    if (sign<S>(x, t.tol) < 0 || sign<S>(x - S(1), t.tol) > 0) return false;
  }
  return true;
}

template <Field S>
MeasurementCheck validate_measurement(const Theory<S>& t, const Measurement<S>& m) {
  if (m.effects.size() < 2) return {false, "a measurement needs at least two outcomes"};
  Vec<S> total = zeros<S>(t.dim());
  for (std::size_t a = 0; a < m.effects.size(); ++a) {
    const auto& e = m.effects[a];
    if (e.size() != t.dim()) return {false, "effect " + std::to_string(a) + " has the wrong dimension"};
    if (!is_valid_effect(t, e)) return {false, "effect " + std::to_string(a) + " is not a valid effect"};
    bool zero = true;
    for (const auto& v : t.vertices)
      if (!is_zero<S>(pair(t, e, v), t.tol)) { zero = false; break; }
    if (zero) return {false, "effect " + std::to_string(a) + " is the zero effect"};
    total = total + e;
  }
  if (!approx_eq(total, t.unit, t.tol)) return {false, "effects do not sum to the unit effect"};
  if (m.metric && m.metric->size() != m.effects.size())
    return {false, "outcome metric size does not match the number of outcomes"};
  return {};
}

template <Field S>
std::vector<S> probabilities(const Theory<S>& t, const Measurement<S>& m, const Vec<S>& w) {
  std::vector<S> p;
  p.reserve(m.effects.size());
  for (const auto& e : m.effects) p.push_back(pair(t, e, w));
  return p;
}

#define GPTLAB_INSTANTIATE(S)                                                                     \
  template Theory<S> make_theory(std::string, std::vector<Vec<S>>, Vec<S>,                        \
                                 std::optional<InnerProduct<S>>, Tolerance);                      \
  template Theory<S> make_classical(int);                                                         \
  template S pair(const Theory<S>&, const Vec<S>&, const Vec<S>&);                                \
  template bool in_state_space(const Theory<S>&, const Vec<S>&);                                  \
  template S effect_eval(const Theory<S>&, const Vec<S>&, const Vec<S>&);                         \
  template bool is_valid_effect(const Theory<S>&, const Vec<S>&);                                 \
  template MeasurementCheck validate_measurement(const Theory<S>&, const Measurement<S>&);        \
  template std::vector<S> probabilities(const Theory<S>&, const Measurement<S>&, const Vec<S>&);

GPTLAB_INSTANTIATE(double)
GPTLAB_INSTANTIATE(Rational)

}  // namespace gptlab
