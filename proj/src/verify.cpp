#include "gptlab/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "gptlab/ideal.hpp"
#include "gptlab/uncertainty.hpp"

namespace gptlab {

namespace {

constexpr std::size_t kKeptFailures = 5;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Inequality ge(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, rhs, lhs >= rhs - kInequalitySlack};
}

// Shared state for the checks on one joint; Werner distances are computed lazily once.
struct JointContext {
  const Theory<double>& t;
  const Measurement<double>& f;
  const Measurement<double>& g;
  Measurement<double> mf, mg;
  std::vector<WitnessCandidate> cands;
  std::optional<double> dw_f, dw_g;

  JointContext(const Theory<double>& th, const Measurement<double>& ff, const Measurement<double>& gg,
               const JointMeasurement<double>& j)
      : t(th), f(ff), g(gg) {
    if (j.rows() != f.size() || j.cols() != g.size())
      throw std::invalid_argument("joint grid does not match the outcome sets");
    auto [a, b] = marginals(j);
    mf = std::move(a);
    mg = std::move(b);
    mf.metric = f.outcome_metric();
    mg.metric = g.outcome_metric();
    cands = witness_candidates(t, j);
  }

  double werner_f() {
    if (!dw_f) dw_f = werner_distance(t, mf, f, Exec::serial);
    return *dw_f;
  }
  double werner_g() {
    if (!dw_g) dw_g = werner_distance(t, mg, g, Exec::serial);
    return *dw_g;
  }
  double width_f(const WitnessCandidate& c, double eps) const {
    return overall_width(OutcomeDistribution<double>(probabilities(t, f, c.state), f.outcome_metric(), t.tol), eps);
  }
  double width_g(const WitnessCandidate& c, double eps) const {
    return overall_width(OutcomeDistribution<double>(probabilities(t, g, c.state), g.outcome_metric(), t.tol), eps);
  }
};

void check_eps(double e1, double e2) {
  if (e1 < 0 || e1 > 1 || e2 < 0 || e2 > 1) throw std::invalid_argument("eps must lie in [0, 1]");
  if (e1 + e2 > 1 + kInequalitySlack) throw std::invalid_argument("eps1 + eps2 must not exceed 1");
}

VerificationReport thm1_impl(JointContext& ctx, double e1, double e2) {
  check_eps(e1, e2);
  VerificationReport rep;
  rep.theorem = "thm1";
  rep.theory = ctx.t.name;
  rep.eps = {e1, e2};
  const double w1 = error_bar_width(ctx.t, ctx.mf, ctx.f, e1);
  const double w2 = error_bar_width(ctx.t, ctx.mg, ctx.g, e2);
  const double e = std::min(1.0, e1 + e2);
  const auto mfm = ctx.f.outcome_metric();
  const auto mgm = ctx.g.outcome_metric();

  std::optional<std::size_t> first_pass;
  std::size_t proof_idx = 0;
  double proof_val = -1;
  std::vector<bool> passes(ctx.cands.size());
  std::vector<std::pair<double, double>> widths(ctx.cands.size());
  for (std::size_t k = 0; k < ctx.cands.size(); ++k) {
    const auto& c = ctx.cands[k];
    widths[k] = {ctx.width_f(c, e), ctx.width_g(c, e)};
    passes[k] = widths[k].first <= w1 + kInequalitySlack && widths[k].second <= w2 + kInequalitySlack;
    if (passes[k] && !first_pass) first_pass = k;
    const double bracket = ball_mass(probabilities(ctx.t, ctx.f, c.state), mfm, c.a, w1) +
                           ball_mass(probabilities(ctx.t, ctx.g, c.state), mgm, c.b, w2);
    if (bracket > proof_val) {
      proof_val = bracket;
      proof_idx = k;
    }
  }
  rep.proof_candidate_passes = !ctx.cands.empty() && passes[proof_idx];
  const std::size_t shown = first_pass.value_or(proof_idx);
  if (!ctx.cands.empty()) {
    rep.witness = ctx.cands[shown];
    rep.inequalities.push_back(ge("W(M^F,F;eps1) >= W_{eps1+eps2}(w^F)", w1, widths[shown].first));
    rep.inequalities.push_back(ge("W(M^G,G;eps2) >= W_{eps1+eps2}(w^G)", w2, widths[shown].second));
  }
  rep.pass = first_pass.has_value();
  if (!rep.pass) {
    for (std::size_t k = 0; k < ctx.cands.size(); ++k)
      rep.scan.push_back("candidate (" + std::to_string(ctx.cands[k].a) + "," + std::to_string(ctx.cands[k].b) +
                         ") weight " + fmt(ctx.cands[k].weight) + " widths " + fmt(widths[k].first) + ", " +
                         fmt(widths[k].second) + " vs " + fmt(w1) + ", " + fmt(w2));
  }
  return rep;
}

VerificationReport cor1_impl(JointContext& ctx, double e1, double e2) {
  check_eps(e1, e2);
  // The bound divides by eps, so zero is excluded here.
  if (e1 <= 0 || e2 <= 0) throw std::invalid_argument("cor1 needs eps in (0, 1]");
  VerificationReport rep;
  rep.theorem = "cor1";
  rep.theory = ctx.t.name;
  rep.eps = {e1, e2};
  const double dwf = ctx.werner_f();
  const double dwg = ctx.werner_g();
  const double e = std::min(1.0, e1 + e2);
  std::optional<std::size_t> first_pass;
  std::vector<std::pair<double, double>> widths(ctx.cands.size());
  for (std::size_t k = 0; k < ctx.cands.size(); ++k) {
    widths[k] = {ctx.width_f(ctx.cands[k], e), ctx.width_g(ctx.cands[k], e)};
    const bool ok = dwf >= 0.5 * e1 * widths[k].first - kInequalitySlack &&
                    dwg >= 0.5 * e2 * widths[k].second - kInequalitySlack;
    if (ok && !first_pass) first_pass = k;
  }
  rep.pass = first_pass.has_value();
  const std::size_t shown = first_pass.value_or(0);
  if (!ctx.cands.empty()) {
    rep.witness = ctx.cands[shown];
    rep.inequalities.push_back(ge("D_W(M^F,F) >= (eps1/2) W_{eps1+eps2}(w^F)", dwf, 0.5 * e1 * widths[shown].first));
    rep.inequalities.push_back(ge("D_W(M^G,G) >= (eps2/2) W_{eps1+eps2}(w^G)", dwg, 0.5 * e2 * widths[shown].second));
  }
  if (!rep.pass)
    for (std::size_t k = 0; k < ctx.cands.size(); ++k)
      rep.scan.push_back("candidate (" + std::to_string(ctx.cands[k].a) + "," + std::to_string(ctx.cands[k].b) +
                         ") widths " + fmt(widths[k].first) + ", " + fmt(widths[k].second) + " D_W " + fmt(dwf) +
                         ", " + fmt(dwg));
  return rep;
}

VerificationReport thm2_impl(JointContext& ctx) {
  VerificationReport rep;
  rep.theorem = "thm2";
  rep.theory = ctx.t.name;
  const double lhs = linf_distance(ctx.t, ctx.mf, ctx.f) + linf_distance(ctx.t, ctx.mg, ctx.g);
  std::optional<std::size_t> first_pass;
  std::size_t proof_idx = 0;
  double proof_val = 3;
  std::vector<double> les(ctx.cands.size());
  for (std::size_t k = 0; k < ctx.cands.size(); ++k) {
    const auto& c = ctx.cands[k];
    const auto pf = probabilities(ctx.t, ctx.f, c.state);
    const auto pg = probabilities(ctx.t, ctx.g, c.state);
    les[k] = localization_error(pf) + localization_error(pg);
    if (lhs >= les[k] - kInequalitySlack && !first_pass) first_pass = k;
    const double bracket = (1 - pf[c.a]) + (1 - pg[c.b]);
    if (bracket < proof_val) {
      proof_val = bracket;
      proof_idx = k;
    }
  }
  const double floor = min_le_sum(ctx.t, ctx.f, ctx.g).value;
  const auto global = ge("D_inf(M^F,F) + D_inf(M^G,G) >= min LE sum", lhs, floor);
  rep.proof_candidate_passes = !ctx.cands.empty() && lhs >= les[proof_idx] - kInequalitySlack;
  const std::size_t shown = first_pass.value_or(proof_idx);
  if (!ctx.cands.empty()) {
    rep.witness = ctx.cands[shown];
    rep.inequalities.push_back(ge("D_inf(M^F,F) + D_inf(M^G,G) >= LE(w^F) + LE(w^G)", lhs, les[shown]));
  }
  rep.inequalities.push_back(global);
  rep.pass = first_pass.has_value() && global.holds;
  if (!rep.pass)
    for (std::size_t k = 0; k < ctx.cands.size(); ++k)
      rep.scan.push_back("candidate (" + std::to_string(ctx.cands[k].a) + "," + std::to_string(ctx.cands[k].b) +
                         ") LE sum " + fmt(les[k]) + " vs " + fmt(lhs));
  return rep;
}

std::vector<double> dirichlet(std::size_t k, double alpha, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> x(k);
  double s = 0;
  for (auto& v : x) {
    v = gamma(rng);
    s += v;
  }
  if (s <= 0) {
    std::fill(x.begin(), x.end(), 1.0 / static_cast<double>(k));
    return x;
  }
  for (auto& v : x) v /= s;
  return x;
}

// column c of the result is a distribution over `rows` outcomes
std::vector<std::vector<double>> stochastic(std::size_t rows, std::size_t cols, double alpha, std::mt19937_64& rng) {
  std::vector<std::vector<double>> p(cols);
  for (auto& col : p) col = dirichlet(rows, alpha, rng);
  return p;
}

Vec<double> sum_effects(const Measurement<double>& m) {
  Vec<double> u = zeros<double>(m.effects.front().size());
  for (const auto& e : m.effects) u = u + e;
  return u;
}

JointMeasurement<double> empty_joint(std::size_t na, std::size_t nb, std::size_t d) {
  JointMeasurement<double> j;
  j.grid.assign(na, std::vector<Vec<double>>(nb, zeros<double>(d)));
  return j;
}

template <class Fn>
std::vector<std::vector<VerificationReport>> collect_indexed(std::size_t count, Exec exec, Fn&& fn) {
  std::vector<std::vector<VerificationReport>> per(count);
  parallel_for(count, exec, [&](std::size_t i) { per[i] = fn(i); });
  return per;
}

void tally(BatteryResult& res, VerificationReport&& r) {
  ++res.runs;
  if (r.pass && r.proof_candidate_passes) return;
  ++res.failures;
  if (res.failed.size() < kKeptFailures) res.failed.push_back(std::move(r));
}

template <class Fn>
BatteryResult run_indexed(std::size_t count, Exec exec, Fn&& fn) {
  BatteryResult res;
  for (auto& reps : collect_indexed(count, exec, std::forward<Fn>(fn)))
    for (auto& r : reps) tally(res, std::move(r));
  return res;
}

std::vector<Measurement<double>> ideal_pool(const Theory<double>& t, std::size_t max_outcomes) {
  std::vector<Measurement<double>> pool;
  for (auto& im : enumerate_ideal_measurements(t, max_outcomes)) {
    auto m = std::move(im.measurement);
    if (m.size() > 2) m.metric = FiniteMetricSpace<double>::line(m.size());
    pool.push_back(std::move(m));
  }
  if (pool.empty()) throw TheoryError("theory has no ideal measurements");
  return pool;
}

}  // namespace

std::vector<WitnessCandidate> witness_candidates(const Theory<double>& t, const JointMeasurement<double>& j) {
  std::vector<WitnessCandidate> out;
  for (std::size_t a = 0; a < j.rows(); ++a)
    for (std::size_t b = 0; b < j.cols(); ++b) {
      const auto& m = j.grid[a][b];
      const double w = t.inner(t.unit, m);
      if (w <= t.tol.abs) continue;
      Vec<double> s = (1.0 / w) * m;
      if (!in_state_space(t, s))
        throw TheoryError("witness candidate (" + std::to_string(a) + "," + std::to_string(b) + ") is not a state");
      out.push_back({a, b, w, std::move(s)});
    }
  return out;
}

VerificationReport verify_thm1(const Theory<double>& t, const Measurement<double>& f, const Measurement<double>& g,
                               const JointMeasurement<double>& j, double eps1, double eps2) {
  JointContext ctx(t, f, g, j);
  return thm1_impl(ctx, eps1, eps2);
}

VerificationReport verify_cor1(const Theory<double>& t, const Measurement<double>& f, const Measurement<double>& g,
                               const JointMeasurement<double>& j, double eps1, double eps2) {
  JointContext ctx(t, f, g, j);
  return cor1_impl(ctx, eps1, eps2);
}

VerificationReport verify_thm2(const Theory<double>& t, const Measurement<double>& f, const Measurement<double>& g,
                               const JointMeasurement<double>& j) {
  JointContext ctx(t, f, g, j);
  return thm2_impl(ctx);
}

VerificationReport verify_thm3_even(const Theory<double>& raw, const Measurement<double>& f,
                                    const Measurement<double>& g, const JointMeasurement<double>& j, EvenCheck check,
                                    double eps1, double eps2) {
  const int n = raw.param;
  const Theory<double> pt = psi_transform(raw);
  const Measurement<double> pf = psi_measurement(n, f);
  const Measurement<double> pg = psi_measurement(n, g);
  JointMeasurement<double> pj = j;
  for (auto& row : pj.grid)
    for (auto& m : row) m = psi_effect(n, m);

  // Outcome probabilities must be representation independent.
  double drift = 0;
  auto compare = [&](const Vec<double>& e_raw, const Vec<double>& e_psi) {
    for (std::size_t k = 0; k < raw.num_vertices(); ++k)
      drift = std::max(drift, std::abs(pair(raw, e_raw, raw.vertices[k]) - pair(pt, e_psi, pt.vertices[k])));
  };
  for (std::size_t a = 0; a < f.size(); ++a) compare(f.effects[a], pf.effects[a]);
  for (std::size_t b = 0; b < g.size(); ++b) compare(g.effects[b], pg.effects[b]);
  for (std::size_t a = 0; a < j.rows(); ++a)
    for (std::size_t b = 0; b < j.cols(); ++b) compare(j.grid[a][b], pj.grid[a][b]);

  VerificationReport rep;
  switch (check) {
    case EvenCheck::thm1: rep = verify_thm1(pt, pf, pg, pj, eps1, eps2); break;
    case EvenCheck::cor1: rep = verify_cor1(pt, pf, pg, pj, eps1, eps2); break;
    case EvenCheck::thm2: rep = verify_thm2(pt, pf, pg, pj); break;
  }
  rep.theorem = "thm3/" + rep.theorem;
  const Inequality agree{"1e-9 >= max probability drift under psi", 1e-9, drift, drift < 1e-9};
  rep.inequalities.push_back(agree);
  rep.pass = rep.pass && agree.holds;
  return rep;
}

VerificationReport verify_propC(const Theory<double>& t, const Measurement<double>& approx,
                                const Measurement<double>& ideal, double eps) {
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("verify_propC: eps must lie in (0, 1]");
  Measurement<double> a = approx;
  a.metric = ideal.outcome_metric();
  const double w = error_bar_width(t, a, ideal, eps);
  const double dw = werner_distance(t, a, ideal, Exec::serial);
  VerificationReport rep;
  rep.theorem = "propC";
  rep.theory = t.name;
  rep.eps = {eps};
  rep.inequalities.push_back(ge("(2/eps) D_W(M,F) >= W(M,F;eps)", 2.0 / eps * dw, w));
  rep.pass = rep.inequalities.back().holds;
  return rep;
}

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

JointMeasurement<double> random_joint(const Theory<double>& t, const Measurement<double>& f,
                                      const Measurement<double>& g, const std::vector<Measurement<double>>& pool,
                                      std::mt19937_64& rng) {
  const std::size_t na = f.size(), nb = g.size(), d = t.dim();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Sparse weights so that single components, including the optimal one, often dominate.
  const auto w = dirichlet(5, 0.3, rng);
  auto joint = empty_joint(na, nb, d);
  auto add = [&](std::size_t a, std::size_t b, double c, const Vec<double>& e) {
    joint.grid[a][b] = joint.grid[a][b] + c * e;
  };

  // Coin-flip products: a fuzzified F outcome with an independent B label, and vice versa.
  const auto ff = fuzzify(f, unit(rng));
  const auto q = dirichlet(nb, 1.0, rng);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b) add(a, b, w[0] * q[b], ff.effects[a]);
  const auto gg = fuzzify(g, unit(rng));
  const auto p = dirichlet(na, 1.0, rng);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b) add(a, b, w[1] * p[a], gg.effects[b]);

  const Vec<double> u = sum_effects(f);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b) add(a, b, w[2] / static_cast<double>(na * nb), u);

  // Classical post-processing of one measurement into both outcome sets.
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() + 1);
  const std::size_t which = pick(rng);
  const Measurement<double>& h = which == pool.size() ? f : which == pool.size() + 1 ? g : pool[which];
  const auto pa = stochastic(na, h.size(), 0.3, rng);
  const auto pb = stochastic(nb, h.size(), 0.3, rng);
  for (std::size_t c = 0; c < h.size(); ++c)
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t b = 0; b < nb; ++b) add(a, b, w[3] * pa[c][a] * pb[c][b], h.effects[c]);

  // The joint minimizing D_inf(M^F, F) + D_inf(M^G, G) sits on the incompatibility frontier.
  const auto best = min_mur_linf(t, f, g).joint;
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t b = 0; b < nb; ++b) add(a, b, w[4], best.grid[a][b]);
  return joint;
}

Measurement<double> random_perturbation(const Measurement<double>& ideal, const std::vector<Measurement<double>>& pool,
                                        std::mt19937_64& rng) {
  const std::size_t k = ideal.size();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double eta = 0.5 * unit(rng);
  const double s = 0.3 * unit(rng);
  Measurement<double> out = ideal;
  for (auto& e : out.effects) e = zeros<double>(e.size());
  const auto noise = stochastic(k, k, 1.0, rng);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t a = 0; a < k; ++a) {
      const double pac = (1 - eta) * (a == c ? 1.0 : 0.0) + eta * noise[c][a];
      out.effects[a] = out.effects[a] + ((1 - s) * pac) * ideal.effects[c];
    }
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const auto& h = pool[pick(rng)];
  const auto r = stochastic(k, h.size(), 0.5, rng);
  for (std::size_t c = 0; c < h.size(); ++c)
    for (std::size_t a = 0; a < k; ++a) out.effects[a] = out.effects[a] + (s * r[c][a]) * h.effects[c];
  return out;
}

TheoremBattery run_theorem_battery(const Theory<double>& t, const BatterySpec& spec, Exec exec) {
  const auto pool = ideal_pool(t, spec.max_outcomes);
  std::vector<std::pair<double, double>> eps;
  for (double a : spec.eps_grid)
    for (double b : spec.eps_grid)
      if (a + b <= 1 + kInequalitySlack) eps.emplace_back(a, b);

  auto per = collect_indexed(spec.joints, exec, [&](std::size_t i) {
    auto rng = rng_for(spec.seed, i);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const auto& f = pool[pick(rng)];
    const auto& g = pool[pick(rng)];
    const auto j = random_joint(t, f, g, pool, rng);
    JointContext ctx(t, f, g, j);
    std::vector<VerificationReport> reps;
    reps.push_back(thm2_impl(ctx));
    for (auto [a, b] : eps) {
      reps.push_back(thm1_impl(ctx, a, b));
      reps.push_back(cor1_impl(ctx, a, b));
    }
    return reps;
  });
  TheoremBattery out;
  for (auto& reps : per)
    for (auto& r : reps) {
      BatteryResult& slot = r.theorem == "thm1" ? out.thm1 : r.theorem == "cor1" ? out.cor1 : out.thm2;
      tally(slot, std::move(r));
    }
  return out;
}

BatteryResult run_even_battery(const Theory<double>& raw, const BatterySpec& spec, Exec exec) {
  const int n = raw.param;
  const Theory<double> pt = psi_transform(raw);
  // Ideal measurements found in psi coordinates, carried back to raw ones by psi^T = psi.
  std::vector<Measurement<double>> pool;
  const Matrix<double> psi = psi_matrix(n);
  for (auto m : ideal_pool(pt, spec.max_outcomes)) {
    for (auto& e : m.effects) e = psi * e;
    pool.push_back(std::move(m));
  }
  std::vector<std::pair<double, double>> eps;
  for (double a : spec.eps_grid)
    for (double b : spec.eps_grid)
      if (a + b <= 1 + kInequalitySlack) eps.emplace_back(a, b);
  return run_indexed(spec.joints, exec, [&](std::size_t i) {
    auto rng = rng_for(spec.seed, i);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const auto& f = pool[pick(rng)];
    const auto& g = pool[pick(rng)];
    const auto j = random_joint(raw, f, g, pool, rng);
    std::vector<VerificationReport> reps;
    reps.push_back(verify_thm3_even(raw, f, g, j, EvenCheck::thm2));
    for (auto [a, b] : eps) {
      reps.push_back(verify_thm3_even(raw, f, g, j, EvenCheck::thm1, a, b));
      reps.push_back(verify_thm3_even(raw, f, g, j, EvenCheck::cor1, a, b));
    }
    return reps;
  });
}

BatteryResult run_propC_battery(const Theory<double>& t, std::size_t samples, const std::vector<double>& eps_grid,
                                std::uint64_t seed, Exec exec) {
  const auto pool = ideal_pool(t, 3);
  return run_indexed(samples, exec, [&](std::size_t i) {
    auto rng = rng_for(seed, i);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const auto& f = pool[pick(rng)];
    const auto ft = random_perturbation(f, pool, rng);
    std::vector<VerificationReport> reps;
    for (double e : eps_grid) reps.push_back(verify_propC(t, ft, f, e));
    return reps;
  });
}

}  // namespace gptlab
