#include "gptlab/compat.hpp"

#include <cmath>
#include <stdexcept>

#include "gptlab/lp.hpp"

namespace gptlab {

namespace {

// Variable layout of the joint: m_ab coordinate i at ((a * |B|) + b) * d + i, then extras.
template <Field S>
struct JointLayout {
  std::size_t na, nb, d, extra;
  std::size_t index(std::size_t a, std::size_t b, std::size_t i) const { return (a * nb + b) * d + i; }
  std::size_t joint_vars() const { return na * nb * d; }
  std::size_t total() const { return joint_vars() + extra; }

  // m_ab(w) >= 0 for every vertex.
  void add_positivity(const Theory<S>& t, LinearProgram<S>& lp) const {
    for (const auto& v : t.vertices) {
      const Vec<S> gv = t.inner.lower(v);
      for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < nb; ++b) {
          Vec<S> row = zeros<S>(total());
          for (std::size_t i = 0; i < d; ++i) row[index(a, b, i)] = gv[i];
          lp.add(std::move(row), Relation::ge, S(0));
        }
    }
  }

  // Row of sum_b m_ab (rows_side) or sum_a m_ab, coordinate i.
  Vec<S> marginal_row(bool f_side, std::size_t k, std::size_t i) const {
    Vec<S> row = zeros<S>(total());
    if (f_side) {
      for (std::size_t b = 0; b < nb; ++b) row[index(k, b, i)] = S(1);
    } else {
      for (std::size_t a = 0; a < na; ++a) row[index(a, k, i)] = S(1);
    }
    return row;
  }

  JointMeasurement<S> extract(const Vec<S>& x) const {
    JointMeasurement<S> j;
    j.grid.assign(na, std::vector<Vec<S>>(nb, zeros<S>(d)));
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t i = 0; i < d; ++i) j.grid[a][b][i] = x[index(a, b, i)];
    return j;
  }
};

template <Field S>
void check_inputs(const Theory<S>& t, const Measurement<S>& f, const Measurement<S>& g) {
  for (const auto* m : {&f, &g}) {
    const auto chk = validate_measurement(t, *m);
    if (!chk.ok) throw TheoryError("invalid measurement: " + chk.failure);
  }
}

}  // namespace

template <Field S>
MeasurementCheck validate_joint(const Theory<S>& t, const JointMeasurement<S>& j) {
  if (j.rows() == 0 || j.cols() == 0) return {false, "joint measurement is empty"};
  Vec<S> total = zeros<S>(t.dim());
  for (std::size_t a = 0; a < j.rows(); ++a) {
    if (j.grid[a].size() != j.cols()) return {false, "joint grid is ragged"};
    for (std::size_t b = 0; b < j.cols(); ++b) {
      const auto& m = j.grid[a][b];
      if (m.size() != t.dim()) return {false, "joint effect has the wrong dimension"};
      for (const auto& v : t.vertices)
        if (sign<S>(pair(t, m, v), t.tol) < 0)
          return {false, "joint effect (" + std::to_string(a) + "," + std::to_string(b) + ") is negative on a vertex"};
      total = total + m;
    }
  }
  if (!approx_eq(total, t.unit, t.tol)) return {false, "joint effects do not sum to the unit effect"};
  return {};
}

template <Field S>
std::pair<Measurement<S>, Measurement<S>> marginals(const JointMeasurement<S>& j) {
  if (j.rows() == 0 || j.cols() == 0) throw std::invalid_argument("marginals: empty joint");
  const std::size_t d = j.grid[0][0].size();
  Measurement<S> mf, mg;
  mf.effects.assign(j.rows(), zeros<S>(d));
  mg.effects.assign(j.cols(), zeros<S>(d));
  for (std::size_t a = 0; a < j.rows(); ++a)
    for (std::size_t b = 0; b < j.cols(); ++b) {
      mf.effects[a] = mf.effects[a] + j.grid[a][b];
      mg.effects[b] = mg.effects[b] + j.grid[a][b];
    }
  return {mf, mg};
}

template <Field S>
CompatResult<S> is_jointly_measurable(const Theory<S>& t, const Measurement<S>& f, const Measurement<S>& g) {
  check_inputs(t, f, g);
  const JointLayout<S> lay{f.size(), g.size(), t.dim(), 0};
  LinearProgram<S> lp(lay.total());
  lay.add_positivity(t, lp);
  for (std::size_t a = 0; a < lay.na; ++a)
    for (std::size_t i = 0; i < lay.d; ++i) lp.add(lay.marginal_row(true, a, i), Relation::eq, f.effects[a][i]);
  for (std::size_t b = 0; b < lay.nb; ++b)
    for (std::size_t i = 0; i < lay.d; ++i) lp.add(lay.marginal_row(false, b, i), Relation::eq, g.effects[b][i]);
  auto x = lp_feasible(lp, t.tol);
  CompatResult<S> res;
  if (!x) return res;
  res.compatible = true;
  res.witness = lay.extract(*x);
  return res;
}

template <Field S>
MurResult<S> min_mur_linf(const Theory<S>& t, const Measurement<S>& f, const Measurement<S>& g) {
  check_inputs(t, f, g);
  const JointLayout<S> lay{f.size(), g.size(), t.dim(), 2};
  const std::size_t tf = lay.joint_vars(), tg = tf + 1;
  LinearProgram<S> lp(lay.total());
  lp.nonnegative(tf);
  lp.nonnegative(tg);
  lay.add_positivity(t, lp);
  for (std::size_t i = 0; i < lay.d; ++i) {
    Vec<S> row = zeros<S>(lay.total());
    for (std::size_t a = 0; a < lay.na; ++a)
      for (std::size_t b = 0; b < lay.nb; ++b) row[lay.index(a, b, i)] = S(1);
    lp.add(std::move(row), Relation::eq, t.unit[i]);
  }
  // |(marginal_k - target_k)(w)| <= t_side at every vertex.
  auto deviation = [&](bool f_side, const Measurement<S>& target, std::size_t slack) {
    for (const auto& v : t.vertices) {
      const Vec<S> gv = t.inner.lower(v);
      for (std::size_t k = 0; k < target.size(); ++k) {
        Vec<S> row = zeros<S>(lay.total());
        S offset(0);
        for (std::size_t i = 0; i < lay.d; ++i) {
          Vec<S> mr = lay.marginal_row(f_side, k, i);
          for (std::size_t c = 0; c < lay.joint_vars(); ++c)
            if (mr[c] != 0) row[c] += gv[i];
          offset += gv[i] * target.effects[k][i];
        }
        Vec<S> up = row, down = S(-1) * row;
        up[slack] = S(-1);
        down[slack] = S(-1);
        lp.add(std::move(up), Relation::le, offset);
        lp.add(std::move(down), Relation::le, -offset);
      }
    }
  };
  deviation(true, f, tf);
  deviation(false, g, tg);
  lp.objective[tf] = S(1);
  lp.objective[tg] = S(1);
  lp.sense = Sense::minimize;
  const auto res = lp_solve(lp, t.tol);
  if (!res.optimal()) throw std::runtime_error("min_mur_linf: LP is not optimal");
  return {res.value, res.point[tf], res.point[tg], lay.extract(res.point)};
}

// The fuzzing family and its degree bound are defined for binary pairs only.
template <Field S>
void require_binary(const Measurement<S>& f, const Measurement<S>& g, const char* what) {
  if (f.size() != 2 || g.size() != 2) throw std::invalid_argument(std::string(what) + " needs binary measurements");
}

template <Field S>
FuzzResult<S> max_fuzz_lambda(const Theory<S>& t, const Measurement<S>& f, const Measurement<S>& g) {
  check_inputs(t, f, g);
  require_binary(f, g, "max_fuzz_lambda");
  const JointLayout<S> lay{f.size(), g.size(), t.dim(), 1};
  const std::size_t lam = lay.joint_vars();
  LinearProgram<S> lp(lay.total());
  lp.lower[lam] = S(0);
  lp.upper[lam] = S(1);
  lay.add_positivity(t, lp);
  // sum_b m_ab - lambda (f_a - u / |A|) = u / |A|, and likewise for G.
  auto marginal = [&](bool f_side, const Measurement<S>& target) {
    const S share = S(1) / from_int<S>(static_cast<long>(target.size()));
    for (std::size_t k = 0; k < target.size(); ++k)
      for (std::size_t i = 0; i < lay.d; ++i) {
        Vec<S> row = lay.marginal_row(f_side, k, i);
        row[lam] = share * t.unit[i] - target.effects[k][i];
        lp.add(std::move(row), Relation::eq, share * t.unit[i]);
      }
  };
  marginal(true, f);
  marginal(false, g);
  lp.objective[lam] = S(1);
  lp.sense = Sense::maximize;
  const auto res = lp_solve(lp, t.tol);
  if (!res.optimal()) throw std::runtime_error("max_fuzz_lambda: LP is not optimal");
  return {res.value, lay.extract(res.point)};
}

template <Field S>
S degree_bound_rhs(const Theory<S>& t, const Measurement<S>& f, const Measurement<S>& g) {
  require_binary(f, g, "degree_bound_rhs");
  S best(0);
  for (std::size_t i = 0; i < t.num_vertices(); ++i) {
    const auto pf = probabilities(t, f, t.vertices[i]);
    const auto pg = probabilities(t, g, t.vertices[i]);
    S s = *std::max_element(pf.begin(), pf.end()) + *std::max_element(pg.begin(), pg.end()) - S(1);
    if (i == 0 || s > best) best = s;
  }
  return best;
}

double degree_bound_closed_form(int n) {
  if (n == kPolygonInfinity) return 1.0 / std::sqrt(2.0);
  if (n < 4 || n % 4 != 0) throw std::invalid_argument("degree bound closed form needs n a multiple of 4");
  if (n % 8 == 0) return 1.0 / std::sqrt(2.0);
  const double r = polygon_radius(n);
  return r * r / std::sqrt(2.0);
}

#define GPTLAB_INSTANTIATE(S)                                                                              \
  template MeasurementCheck validate_joint(const Theory<S>&, const JointMeasurement<S>&);                  \
  template std::pair<Measurement<S>, Measurement<S>> marginals(const JointMeasurement<S>&);                \
  template CompatResult<S> is_jointly_measurable(const Theory<S>&, const Measurement<S>&, const Measurement<S>&); \
  template MurResult<S> min_mur_linf(const Theory<S>&, const Measurement<S>&, const Measurement<S>&);      \
  template FuzzResult<S> max_fuzz_lambda(const Theory<S>&, const Measurement<S>&, const Measurement<S>&);  \
  template S degree_bound_rhs(const Theory<S>&, const Measurement<S>&, const Measurement<S>&);

GPTLAB_INSTANTIATE(double)
GPTLAB_INSTANTIATE(Rational)

}  // namespace gptlab
