#include "gptlab/uncertainty.hpp"

#include <algorithm>

#include "gptlab/lp.hpp"

namespace gptlab {

template <Field S>
FiniteMetricSpace<S>::FiniteMetricSpace(std::vector<std::string> labels, Matrix<S> dist, Tolerance tol)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
  const std::size_t k = labels_.size();
  if (dist_.rows() != k || dist_.cols() != k) throw std::invalid_argument("metric: matrix size does not match labels");
  for (std::size_t a = 0; a < k; ++a) {
    if (dist_(a, a) != 0) throw std::invalid_argument("metric: nonzero self-distance");
    for (std::size_t b = 0; b < k; ++b) {
      if (!approx_eq<S>(dist_(a, b), dist_(b, a), tol)) throw std::invalid_argument("metric: not symmetric");
      if (a != b && sign<S>(dist_(a, b), tol) <= 0) throw std::invalid_argument("metric: distinct points at distance 0");
      for (std::size_t c = 0; c < k; ++c)
        if (sign<S>(dist_(a, c) - dist_(a, b) - dist_(b, c), tol) > 0)
          throw std::invalid_argument("metric: triangle inequality fails");
    }
  }
}

template <Field S>
FiniteMetricSpace<S> FiniteMetricSpace<S>::discrete(std::size_t k) {
  std::vector<std::string> labels;
  Matrix<S> d(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    labels.push_back(std::to_string(a));
    for (std::size_t b = 0; b < k; ++b)
      if (a != b) d(a, b) = S(1);
  }
  return FiniteMetricSpace(std::move(labels), std::move(d));
}

template <Field S>
FiniteMetricSpace<S> FiniteMetricSpace<S>::line(std::size_t k) {
  std::vector<std::string> labels;
  Matrix<S> d(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    labels.push_back(std::to_string(a));
    for (std::size_t b = 0; b < k; ++b)
      d(a, b) = from_int<S>(a > b ? static_cast<long>(a - b) : static_cast<long>(b - a));
  }
  return FiniteMetricSpace(std::move(labels), std::move(d));
}

template <Field S>
OutcomeDistribution<S>::OutcomeDistribution(std::vector<S> p, FiniteMetricSpace<S> m, Tolerance tol)
    : probs(std::move(p)), space(std::move(m)) {
  if (probs.size() != space.size()) throw std::invalid_argument("distribution: size does not match the metric space");
  S total(0);
  for (const auto& x : probs) {
    if (sign<S>(x, tol) < 0) throw std::invalid_argument("distribution: negative probability");
    total += x;
  }
  if (!approx_eq<S>(total, S(1), tol)) throw std::invalid_argument("distribution: probabilities do not sum to 1");
}

template <Field S>
std::vector<S> width_candidates(const FiniteMetricSpace<S>& m) {
  std::vector<S> w{S(0)};
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b) w.push_back(S(2) * m(a, b));
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  return w;
}

template <Field S>
S ball_mass(const std::vector<S>& p, const FiniteMetricSpace<S>& m, std::size_t a, const S& w) {
  S mass(0);
  for (std::size_t x = 0; x < m.size(); ++x)
    if (S(2) * m(x, a) <= w) mass += p[x];
  return mass;
}

template <Field S>
S overall_width(const OutcomeDistribution<S>& p, const S& eps, Tolerance tol) {
  if (eps < 0 || eps > 1) throw std::invalid_argument("overall_width: eps must lie in [0, 1]");
  const S need = S(1) - eps;
  const auto cands = width_candidates(p.space);
  for (const auto& w : cands)
    for (std::size_t a = 0; a < p.space.size(); ++a)
      if (approx_ge<S>(ball_mass(p.probs, p.space, a, w), need, tol)) return w;
  return cands.back();
}

template <Field S>
S localization_error(const std::vector<S>& p) {
  if (p.empty()) throw std::invalid_argument("localization_error: empty distribution");
  return S(1) - *std::max_element(p.begin(), p.end());
}

template <Field S>
OutcomeDistribution<S> distribution(const Theory<S>& t, const Measurement<S>& m, const Vec<S>& w) {
  if (!in_state_space(t, w)) throw TheoryError("distribution: point is not a state");
  return OutcomeDistribution<S>(probabilities(t, m, w), m.outcome_metric(), t.tol);
}

template <Field S>
S error_bar_width(const Theory<S>& t, const Measurement<S>& approx, const Measurement<S>& ideal, const S& eps) {
  if (eps < 0 || eps > 1) throw std::invalid_argument("error_bar_width: eps must lie in [0, 1]");
  if (approx.size() != ideal.size()) throw std::invalid_argument("error_bar_width: outcome sets differ");
  const auto metric = ideal.outcome_metric();
  const std::size_t k = ideal.size();
  // Vertices of each eigenstate face, and the approximating distribution there.
  std::vector<std::vector<std::vector<S>>> face_probs(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (const auto& v : t.vertices)
      if (approx_eq<S>(pair(t, ideal.effects[a], v), S(1), t.tol)) face_probs[a].push_back(probabilities(t, approx, v));
    if (face_probs[a].empty())
      throw TheoryError("error_bar_width: eigenstate face of outcome " + std::to_string(a) + " has no vertex");
  }
  const S need = S(1) - eps;
  const auto cands = width_candidates(metric);
  for (const auto& w : cands) {
    bool ok = true;
    for (std::size_t a = 0; a < k && ok; ++a)
      for (const auto& p : face_probs[a])
        if (!approx_ge<S>(ball_mass(p, metric, a, w), need, t.tol)) { ok = false; break; }
    if (ok) return w;
  }
  return cands.back();
}

namespace {

template <Field S>
S werner_at_vertex(const Theory<S>& t, const Measurement<S>& approx, const Measurement<S>& ideal,
                   const FiniteMetricSpace<S>& metric, const Vec<S>& v) {
  const std::size_t k = ideal.size();
  Vec<S> c(k);
  for (std::size_t a = 0; a < k; ++a) c[a] = pair(t, approx.effects[a], v) - pair(t, ideal.effects[a], v);
  LinearProgram<S> lp(k);
  lp.lower[0] = S(0);
  lp.upper[0] = S(0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      Vec<S> row = zeros<S>(k);
      row[a] = S(1);
      row[b] = S(-1);
      lp.add(std::move(row), Relation::le, metric(a, b));
    }
  lp.sense = Sense::maximize;
  S best(0);
  for (int sgn : {1, -1}) {
    for (std::size_t a = 0; a < k; ++a) lp.objective[a] = from_int<S>(sgn) * c[a];
    const auto res = lp_solve(lp, t.tol);
    if (!res.optimal()) throw std::runtime_error("werner_distance: transport LP is not optimal");
    if (res.value > best) best = res.value;
  }
  return best;
}

}  // namespace

template <Field S>
S werner_distance(const Theory<S>& t, const Measurement<S>& approx, const Measurement<S>& ideal, Exec exec) {
  if (approx.size() != ideal.size()) throw std::invalid_argument("werner_distance: outcome sets differ");
  const auto metric = ideal.outcome_metric();
  std::vector<S> per(t.num_vertices());
  parallel_for(t.num_vertices(), exec,
               [&](std::size_t u) { per[u] = werner_at_vertex(t, approx, ideal, metric, t.vertices[u]); });
  return *std::max_element(per.begin(), per.end());
}

template <Field S>
S linf_distance(const Theory<S>& t, const Measurement<S>& approx, const Measurement<S>& ideal) {
  if (approx.size() != ideal.size()) throw std::invalid_argument("linf_distance: outcome sets differ");
  S best(0);
  for (const auto& v : t.vertices)
    for (std::size_t a = 0; a < ideal.size(); ++a) {
      S d = abs_value<S>(pair(t, approx.effects[a], v) - pair(t, ideal.effects[a], v));
      if (d > best) best = d;
    }
  return best;
}

template <Field S>
MinLeSum<S> min_le_sum(const Theory<S>& t, const Measurement<S>& f, const Measurement<S>& g) {
  MinLeSum<S> best{S(3), 0};
  for (std::size_t i = 0; i < t.num_vertices(); ++i) {
    S s = localization_error(probabilities(t, f, t.vertices[i])) + localization_error(probabilities(t, g, t.vertices[i]));
    if (i == 0 || s < best.value) best = {s, i};
  }
  return best;
}

#define GPTLAB_INSTANTIATE(S)                                                                             \
  template class FiniteMetricSpace<S>;                                                                    \
  template struct OutcomeDistribution<S>;                                                                 \
  template std::vector<S> width_candidates(const FiniteMetricSpace<S>&);                                  \
  template S ball_mass(const std::vector<S>&, const FiniteMetricSpace<S>&, std::size_t, const S&);        \
  template S overall_width(const OutcomeDistribution<S>&, const S&, Tolerance);                           \
  template S localization_error(const std::vector<S>&);                                                   \
  template OutcomeDistribution<S> distribution(const Theory<S>&, const Measurement<S>&, const Vec<S>&);   \
  template S error_bar_width(const Theory<S>&, const Measurement<S>&, const Measurement<S>&, const S&);   \
  template S werner_distance(const Theory<S>&, const Measurement<S>&, const Measurement<S>&, Exec);       \
  template S linf_distance(const Theory<S>&, const Measurement<S>&, const Measurement<S>&);               \
  template MinLeSum<S> min_le_sum(const Theory<S>&, const Measurement<S>&, const Measurement<S>&);

GPTLAB_INSTANTIATE(double)
GPTLAB_INSTANTIATE(Rational)

}  // namespace gptlab
