#include "gptlab/ideal.hpp"

#include <cmath>
#include <numbers>

#include "gptlab/symmetry.hpp"

namespace gptlab {

namespace {

bool is_polygon_kind(TheoryKind k) { return k == TheoryKind::polygon || k == TheoryKind::disc_approx; }

// Candidate effect with provenance.
template <Field S>
struct Candidate {
  Vec<S> effect;
  std::vector<std::size_t> subset;
  bool complemented = false;
};

template <Field S>
bool below_unit(const Theory<S>& t, const Vec<S>& e) {
  for (const auto& v : t.vertices)
    if (sign<S>(pair(t, e, v) - S(1), t.tol) > 0) return false;
  return true;
}

template <Field S>
bool nonneg_on_vertices(const Theory<S>& t, const Vec<S>& e) {
  for (const auto& v : t.vertices)
    if (sign<S>(pair(t, e, v), t.tol) < 0) return false;
  return true;
}

template <Field S>
bool zero_on_vertices(const Theory<S>& t, const Vec<S>& e) {
  for (const auto& v : t.vertices)
    if (!is_zero<S>(pair(t, e, v), t.tol)) return false;
  return true;
}

// Subsets whose effect sum stays valid; supersets of an invalid subset are invalid because
// every pure effect is nonnegative on the vertices.
template <Field S>
void collect_subsets(const Theory<S>& t, const std::vector<Vec<S>>& pure, std::size_t next,
                     std::vector<std::size_t>& subset, const Vec<S>& sum, std::vector<Candidate<S>>& out) {
  for (std::size_t i = next; i < pure.size(); ++i) {
    Vec<S> s = sum + pure[i];
    if (!below_unit(t, s)) continue;
    subset.push_back(i);
    out.push_back({s, subset, false});
    collect_subsets(t, pure, i + 1, subset, s, out);
    subset.pop_back();
  }
}

template <Field S>
void search_measurements(const Theory<S>& t, const std::vector<Candidate<S>>& cands, std::size_t slots,
                         std::size_t start, std::vector<std::size_t>& chosen, const Vec<S>& remainder,
                         std::vector<IdealMeasurement<S>>& out) {
  if (slots == 1) {
    for (std::size_t c = start; c < cands.size(); ++c) {
      if (!approx_eq(cands[c].effect, remainder, t.tol)) continue;
      chosen.push_back(c);
      IdealMeasurement<S> im;
      for (auto k : chosen) {
        im.measurement.effects.push_back(cands[k].effect);
        im.subsets.push_back(cands[k].subset);
        im.complemented.push_back(cands[k].complemented);
      }
      out.push_back(std::move(im));
      chosen.pop_back();
      return;
    }
    return;
  }
  for (std::size_t c = start; c < cands.size(); ++c) {
    Vec<S> rest = remainder - cands[c].effect;
    if (!nonneg_on_vertices(t, rest) || zero_on_vertices(t, rest)) continue;
    chosen.push_back(c);
    search_measurements(t, cands, slots - 1, c, chosen, rest, out);
    chosen.pop_back();
  }
}

}  // namespace

template <Field S>
std::vector<Vec<S>> indecomposable_pure_effects(const Theory<S>& t) {
  if constexpr (!is_exact_v<S>) {
    if (t.kind == TheoryKind::psi_polygon) {
      std::vector<Vec<S>> out;
      for (int i = 0; i < t.param; ++i) out.push_back(psi_polygon_effect(t.param, i));
      return out;
    }
  }
  const auto g = automorphism_group(t);
  if (!is_transitive(g, t.num_vertices())) throw TheoryError("pure effects: theory is not transitive");
  const Matrix<S> avg = averaged_inner_product(g);
  if (!approx_eq(avg, t.inner.gram(), t.tol))
    throw TheoryError("pure effects: theory pairing is not the averaged inner product; canonicalize first");
  if (!is_self_dual(t))
    throw TheoryError("pure effects: theory is not self-dual; even polygons need the psi-representation");
  const S n0 = t.inner(t.vertices[0], t.vertices[0]);
  std::vector<Vec<S>> out;
  for (const auto& v : t.vertices) out.push_back((S(1) / n0) * v);
  return out;
}

template <Field S>
std::vector<IdealMeasurement<S>> enumerate_ideal_measurements(const Theory<S>& t, std::size_t max_outcomes) {
  if (max_outcomes < 2) throw std::invalid_argument("ideal measurements need at least two outcomes");
  const auto pure = indecomposable_pure_effects(t);

  std::vector<Candidate<S>> raw;
  std::vector<std::size_t> subset;
  collect_subsets(t, pure, 0, subset, zeros<S>(t.dim()), raw);
  std::vector<Candidate<S>> cands;
  auto add = [&](Candidate<S> c) {
    if (zero_on_vertices(t, c.effect)) return;
    for (const auto& e : cands)
      if (approx_eq(e.effect, c.effect, t.tol)) return;
    cands.push_back(std::move(c));
  };
  for (const auto& c : raw) add(c);
  for (const auto& c : raw) add({t.unit - c.effect, c.subset, true});

  std::vector<IdealMeasurement<S>> out;
  for (std::size_t k = 2; k <= max_outcomes; ++k) {
    std::vector<std::size_t> chosen;
    search_measurements(t, cands, k, 0, chosen, t.unit, out);
  }
  return out;
}

template <Field S>
Vec<S> eigenstate(const Theory<S>& t, const Vec<S>& f, bool require_sharp) {
  const S uf = t.inner(t.unit, f);
  if (sign<S>(uf, t.tol) <= 0) throw TheoryError("eigenstate: <u, f> is not positive");
  Vec<S> w = (S(1) / uf) * f;
  if (!in_state_space(t, w)) throw TheoryError("eigenstate: f / <u, f> is not a state");
  if (require_sharp && !approx_eq<S>(t.inner(f, w), S(1), t.tol))
    throw TheoryError("eigenstate: f does not evaluate to 1 on f / <u, f>");
  return w;
}

template <Field S>
Measurement<S> fuzzify(const Measurement<S>& m, const S& lambda) {
  if (lambda < 0 || lambda > 1) throw std::invalid_argument("fuzzify: lambda must lie in [0, 1]");
  if (m.effects.empty()) throw std::invalid_argument("fuzzify: empty measurement");
  Vec<S> u = zeros<S>(m.effects.front().size());
  for (const auto& e : m.effects) u = u + e;
  const S share = (S(1) - lambda) / from_int<S>(static_cast<long>(m.effects.size()));
  Measurement<S> out = m;
  for (auto& e : out.effects) e = lambda * e + share * u;
  return out;
}

Matrix<double> psi_matrix(int n) {
  const double r = polygon_radius(n);
  return Matrix<double>::diagonal({r, r, 1.0});
}

Theory<double> psi_transform(const Theory<double>& t) {
  if (!is_polygon_kind(t.kind)) throw TheoryError("psi_transform: needs a raw polygon theory");
  if (t.param % 2 != 0) throw TheoryError("psi_transform: odd polygons are already self-dual");
  const Matrix<double> psi = psi_matrix(t.param);
  std::vector<Vec<double>> verts;
  for (const auto& v : t.vertices) verts.push_back(psi * v);
  auto out = make_theory<double>(t.name + "-psi", std::move(verts), t.unit, std::nullopt, t.tol);
  out.kind = TheoryKind::psi_polygon;
  out.param = t.param;
  return out;
}

Theory<double> psi_inverse_transform(const Theory<double>& t) {
  if (t.kind != TheoryKind::psi_polygon) throw TheoryError("psi_inverse_transform: needs a psi-represented polygon");
  const Matrix<double> inv = *inverse(psi_matrix(t.param));
  std::vector<Vec<double>> verts;
  for (const auto& v : t.vertices) verts.push_back(inv * v);
  std::string name = t.name;
  if (name.size() > 4 && name.ends_with("-psi")) name.resize(name.size() - 4);
  auto out = make_theory<double>(name, std::move(verts), t.unit, std::nullopt, t.tol);
  out.kind = TheoryKind::polygon;
  out.param = t.param;
  return out;
}

Vec<double> psi_effect(int n, const Vec<double>& e) { return *inverse(psi_matrix(n)) * e; }

Measurement<double> psi_measurement(int n, const Measurement<double>& m) {
  Measurement<double> out = m;
  for (auto& e : out.effects) e = psi_effect(n, e);
  return out;
}

Vec<double> even_polygon_effect(int n, int i) {
  const double r = polygon_radius(n);
  const double a = (2.0 * i - 1.0) * std::numbers::pi / n;
  return {0.5 * r * std::cos(a), 0.5 * r * std::sin(a), 0.5};
}

Vec<double> psi_polygon_effect(int n, int i) {
  const double a = (2.0 * i - 1.0) * std::numbers::pi / n;
  return {0.5 * std::cos(a), 0.5 * std::sin(a), 0.5};
}

Vec<double> odd_polygon_effect(int n, int i) {
  const double r = polygon_radius(n);
  const double a = 2.0 * std::numbers::pi * i / n;
  const double s = 1.0 / (1.0 + r * r);
  return {s * r * std::cos(a), s * r * std::sin(a), s};
}

std::pair<Measurement<double>, Measurement<double>> perpendicular_ideal_pair(const Theory<double>& t) {
  const bool psi = t.kind == TheoryKind::psi_polygon;
  if (!psi && !is_polygon_kind(t.kind)) throw TheoryError("perpendicular pair: needs a polygon theory");
  const int n = t.param;
  if (n % 4 != 0) throw TheoryError("perpendicular pair: n must be a multiple of 4");
  auto effect = [&](int i) { return psi ? psi_polygon_effect(n, i) : even_polygon_effect(n, i); };
  const Vec<double> f = effect(1);
  const Vec<double> g = effect(1 + n / 4);
  Measurement<double> mf{{f, t.unit - f}, std::nullopt};
  Measurement<double> mg{{g, t.unit - g}, std::nullopt};
  return {mf, mg};
}

#define GPTLAB_INSTANTIATE(S)                                                                            \
  template std::vector<Vec<S>> indecomposable_pure_effects(const Theory<S>&);                            \
  template std::vector<IdealMeasurement<S>> enumerate_ideal_measurements(const Theory<S>&, std::size_t); \
  template Vec<S> eigenstate(const Theory<S>&, const Vec<S>&, bool);                                     \
  template Measurement<S> fuzzify(const Measurement<S>&, const S&);

GPTLAB_INSTANTIATE(double)
GPTLAB_INSTANTIATE(Rational)

}  // namespace gptlab
