#include "gptlab/lp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gptlab {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

namespace {

constexpr std::size_t kMaxPivots = 200000;
constexpr double kCleanThreshold = 1e-13;
constexpr double kCertifySlack = 1e-7;
// Float tableaus are rebuilt from the original rows this often, which bounds drift.
constexpr std::size_t kRefactorEvery = 64;
constexpr double kRelativePivot = 1e-3;

// x_j = offset + sign_pos * y[pos] (+ sign_neg * y[neg] for free variables).
template <Field S>
struct VarMap {
  S offset{0};
  std::size_t pos = 0;
  S pos_sign{1};
  std::optional<std::size_t> neg;
};

// Dense tableau over the standard form  A y = b, y >= 0, b >= 0.
// Row m holds the reduced costs; its last entry holds minus the objective value.
template <Field S>
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), t_((m + 1) * (n + 1), S(0)), basis_(m, 0) {}

  S& at(std::size_t i, std::size_t j) { return t_[i * (n_ + 1) + j]; }
  const S& at(std::size_t i, std::size_t j) const { return t_[i * (n_ + 1) + j]; }
  S& rhs(std::size_t i) { return at(i, n_); }
  S& cost(std::size_t j) { return at(m_, j); }

  std::size_t rows() const { return m_; }
  // Keeps the standard-form rows so a float tableau can be rebuilt as B^{-1} [A | b].
  void snapshot() { orig_.assign(t_.begin(), t_.begin() + static_cast<std::ptrdiff_t>(m_ * (n_ + 1))); }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    S inv = S(1) / at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) *= inv;
    at(r, c) = S(1);
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      S f = at(i, c);
      if (f == 0) continue;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (at(r, j) == 0) continue;
        at(i, j) -= f * at(r, j);
        if constexpr (!is_exact_v<S>) {
          if (std::abs(at(i, j)) < kCleanThreshold) at(i, j) = 0;
        }
      }
      at(i, c) = S(0);
    }
    basis_[r] = c;
    ++pivots_since_rebuild_;
  }

  // Loads costs c (length n) and prices out the current basis.
  void set_costs(const Vec<S>& c) {
    costs_ = c;
    for (std::size_t j = 0; j < n_; ++j) cost(j) = c[j];
    at(m_, n_) = S(0);
    for (std::size_t i = 0; i < m_; ++i) {
      S cb = c[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(m_, j) -= cb * at(i, j);
    }
  }

  void drop_row(std::size_t r) {
    if (!orig_.empty())
      orig_.erase(orig_.begin() + static_cast<std::ptrdiff_t>(r * (n_ + 1)),
                  orig_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (n_ + 1)));
    for (std::size_t i = r; i < m_; ++i) {
      for (std::size_t j = 0; j <= n_; ++j) at(i, j) = at(i + 1, j);
      if (i + 1 < m_) basis_[i] = basis_[i + 1];
    }
    --m_;
    basis_.pop_back();
    t_.resize((m_ + 1) * (n_ + 1));
  }

  // Float only: recomputes every row from the snapshot for the current basis, then re-prices.
  // Returns false when the basis matrix is numerically singular; the tableau is then kept.
  bool refactor() {
    if constexpr (is_exact_v<S>) {
      return true;
    } else {
      if (orig_.empty() || m_ == 0) return true;
      Eigen::MatrixXd b(m_, m_);
      Eigen::MatrixXd a(m_, n_ + 1);
      for (std::size_t i = 0; i < m_; ++i) {
        for (std::size_t j = 0; j <= n_; ++j) a(i, j) = orig_[i * (n_ + 1) + j];
      }
      for (std::size_t k = 0; k < m_; ++k) b.col(k) = a.col(basis_[k]);
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(b);
      if (!(std::abs(lu.determinant()) > 0)) return false;
      const Eigen::MatrixXd t = lu.solve(a);
      for (std::size_t i = 0; i < m_; ++i) {
        for (std::size_t j = 0; j <= n_; ++j) {
          const double v = t(i, j);
          at(i, j) = std::abs(v) < kCleanThreshold ? 0.0 : v;
        }
        at(i, basis_[i]) = 1.0;
        // Primal feasibility lost only to rounding is restored.
        if (rhs(i) < 0 && rhs(i) > -kCertifySlack) rhs(i) = 0;
      }
      set_costs(costs_);
      for (std::size_t k = 0; k < m_; ++k) cost(basis_[k]) = 0;
      pivots_since_rebuild_ = 0;
      return true;
    }
  }

  static constexpr bool exact_mode = is_exact_v<S>;

  // Minimum ratio, ties to the smallest basic index. Returns m_ when no entry is positive.
  std::size_t bland_row(std::size_t enter, Tolerance tol) {
    std::size_t leave = m_;
    S best{0};
    for (std::size_t i = 0; i < m_; ++i) {
      if (sign<S>(at(i, enter), tol) <= 0) continue;
      S ratio = rhs(i) / at(i, enter);
      if (leave == m_) {
        leave = i;
        best = ratio;
        continue;
      }
      int cmp = sign<S>(ratio - best, Tolerance{tol.abs * 1e-3});
      if (cmp < 0 || (cmp == 0 && basis_[i] < basis_[leave])) {
        leave = i;
        best = ratio;
      }
    }
    return leave;
  }

  // Float ratio test in two passes. The first bounds the step with every row relaxed by tol;
  // the second keeps rows within that bound whose pivot is not tiny next to the largest one,
  // then takes the smallest basic index as in Bland's rule.
  std::size_t harris_row(std::size_t enter, Tolerance tol) {
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = to_double(at(i, enter));
      if (a <= tol.abs) continue;
      bound = std::min(bound, (std::max(to_double(rhs(i)), 0.0) + tol.abs) / a);
    }
    if (!std::isfinite(bound)) return m_;
    double biggest = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = to_double(at(i, enter));
      if (a > tol.abs && std::max(to_double(rhs(i)), 0.0) / a <= bound) biggest = std::max(biggest, a);
    }
    std::size_t leave = m_;
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = to_double(at(i, enter));
      if (a < kRelativePivot * biggest || a <= tol.abs) continue;
      if (std::max(to_double(rhs(i)), 0.0) / a > bound) continue;
      if (leave == m_ || basis_[i] < basis_[leave]) leave = i;
    }
    return leave;
  }

  // Bland's rule. `allowed[j]` masks out retired artificial columns.
  // Returns false when unbounded.
  bool optimize(const std::vector<bool>& allowed, Tolerance tol) {
    bool fresh = pivots_since_rebuild_ == 0;
    for (std::size_t iter = 0; iter < kMaxPivots; ++iter) {
      if constexpr (!is_exact_v<S>) {
        if (iter > 0 && iter % kRefactorEvery == 0 && !fresh) fresh = refactor();
      }
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (allowed[j] && sign<S>(cost(j), tol) < 0) { enter = j; break; }
      }
      if (enter == n_) {
        // Optimality is only accepted on a freshly rebuilt float tableau.
        if constexpr (!is_exact_v<S>) {
          if (!fresh && refactor()) {
            fresh = true;
            continue;
          }
        }
        return true;
      }
      const std::size_t leave = exact_mode ? bland_row(enter, tol) : harris_row(enter, tol);
      if (leave == m_) {
        if constexpr (!is_exact_v<S>) {
          if (!fresh && refactor()) {
            fresh = true;
            continue;
          }
        }
        return false;
      }
      pivot(leave, enter);
      fresh = false;
    }
    throw std::runtime_error("simplex: pivot limit exceeded");
  }

 private:
  std::size_t m_, n_;
  std::vector<S> t_;
  std::vector<std::size_t> basis_;
  std::vector<S> orig_;
  Vec<S> costs_;
  std::size_t pivots_since_rebuild_ = 0;
};

template <Field S>
struct StandardForm {
  std::vector<VarMap<S>> vars;
  std::size_t num_struct = 0;   // y columns
  std::size_t num_slack = 0;
  std::size_t num_art = 0;
  Tableau<S> tab{0, 0};
  std::vector<bool> is_art;
};

template <Field S>
StandardForm<S> build(const LinearProgram<S>& lp) {
  StandardForm<S> sf;
  const std::size_t n = lp.num_vars;
  if (lp.lower.size() != n || lp.upper.size() != n || lp.objective.size() != n)
    throw std::invalid_argument("linear program: inconsistent sizes");

  struct Row {
    Vec<S> a;  // over y
    Relation rel;
    S b;
  };
  std::vector<Row> rows;
  std::vector<std::pair<std::size_t, S>> upper_rows;  // y_k <= value

  sf.vars.resize(n);
  std::size_t ny = 0;
  for (std::size_t j = 0; j < n; ++j) {
    auto& vm = sf.vars[j];
    const auto& lo = lp.lower[j];
    const auto& up = lp.upper[j];
    if (lo && up && *up < *lo) {
      // Empty box: encode as an infeasible row so the caller sees "infeasible".
      vm.offset = *lo;
      vm.pos = ny++;
      upper_rows.push_back({vm.pos, *up - *lo});
    } else if (lo) {
      vm.offset = *lo;
      vm.pos = ny++;
      if (up) upper_rows.push_back({vm.pos, *up - *lo});
    } else if (up) {
      vm.offset = *up;
      vm.pos = ny++;
      vm.pos_sign = S(-1);
    } else {
      vm.pos = ny++;
      vm.neg = ny++;
    }
  }
  sf.num_struct = ny;

  for (const auto& c : lp.constraints) {
    if (c.coeffs.size() != n) throw std::invalid_argument("linear program: constraint width mismatch");
    Row r{zeros<S>(ny), c.rel, c.rhs};
    for (std::size_t j = 0; j < n; ++j) {
      if (c.coeffs[j] == 0) continue;
      const auto& vm = sf.vars[j];
      r.b -= c.coeffs[j] * vm.offset;
      r.a[vm.pos] += c.coeffs[j] * vm.pos_sign;
      if (vm.neg) r.a[*vm.neg] -= c.coeffs[j];
    }
    rows.push_back(std::move(r));
  }
  for (auto& [k, v] : upper_rows) {
    Row r{zeros<S>(ny), Relation::le, v};
    r.a[k] = S(1);
    rows.push_back(std::move(r));
  }

  const std::size_t m = rows.size();
  std::size_t ns = 0;
  for (const auto& r : rows) ns += r.rel != Relation::eq;
  sf.num_slack = ns;

  // Normalize b >= 0 and decide which rows need an artificial.
  std::vector<int> slack_sign(m, 0);
  std::vector<bool> needs_art(m, true);
  for (std::size_t i = 0; i < m; ++i) {
    auto& r = rows[i];
    if (r.rel == Relation::le) slack_sign[i] = 1;
    if (r.rel == Relation::ge) slack_sign[i] = -1;
    if (r.b < 0) {
      for (auto& x : r.a) x = -x;
      r.b = -r.b;
      slack_sign[i] = -slack_sign[i];
    }
    if (slack_sign[i] == 1) needs_art[i] = false;
  }
  std::size_t na = 0;
  for (bool b : needs_art) na += b;
  sf.num_art = na;

  const std::size_t ncols = ny + ns + na;
  sf.tab = Tableau<S>(m, ncols);
  sf.is_art.assign(ncols, false);
  std::size_t s_col = ny, a_col = ny + ns;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < ny; ++k) sf.tab.at(i, k) = rows[i].a[k];
    sf.tab.rhs(i) = rows[i].b;
    std::optional<std::size_t> slack;
    if (slack_sign[i] != 0) {
      slack = s_col++;
      sf.tab.at(i, *slack) = S(slack_sign[i]);
    }
    if (needs_art[i]) {
      sf.tab.at(i, a_col) = S(1);
      sf.is_art[a_col] = true;
      sf.tab.basis()[i] = a_col++;
    } else {
      sf.tab.basis()[i] = *slack;
    }
  }
  sf.tab.snapshot();
  return sf;
}

template <Field S>
Vec<S> extract(StandardForm<S>& sf, std::size_t n) {
  Vec<S> y = zeros<S>(sf.tab.cols());
  for (std::size_t i = 0; i < sf.tab.rows(); ++i) y[sf.tab.basis()[i]] = sf.tab.rhs(i);
  Vec<S> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& vm = sf.vars[j];
    x[j] = vm.offset + vm.pos_sign * y[vm.pos];
    if (vm.neg) x[j] -= y[*vm.neg];
  }
  return x;
}

// Phase 1. Leaves a feasible basis without artificials, or returns false.
template <Field S>
bool phase_one(StandardForm<S>& sf, std::vector<bool>& allowed, Tolerance tol) {
  auto& tab = sf.tab;
  const std::size_t ncols = tab.cols();
  allowed.assign(ncols, true);
  if (sf.num_art == 0) return true;

  Vec<S> c = zeros<S>(ncols);
  for (std::size_t j = 0; j < ncols; ++j)
    if (sf.is_art[j]) c[j] = S(1);
  tab.set_costs(c);
  tab.optimize(allowed, tol);

  S scale{1};
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    if constexpr (!is_exact_v<S>) scale = std::max(scale, std::abs(tab.rhs(i)));
  }
  S phase_value = -tab.at(tab.rows(), ncols);
  if (sign<S>(phase_value, Tolerance{tol.abs * to_double(scale)}) > 0) return false;

  // Drive zero-level artificials out of the basis; rows that cannot be pivoted are redundant.
  for (std::size_t i = 0; i < tab.rows();) {
    if (!sf.is_art[tab.basis()[i]]) {
      ++i;
      continue;
    }
    std::size_t col = ncols;
    double best = 0;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (sf.is_art[j]) continue;
      if constexpr (is_exact_v<S>) {
        if (tab.at(i, j) != 0) { col = j; break; }
      } else {
        if (std::abs(tab.at(i, j)) > std::max(best, tol.abs)) { best = std::abs(tab.at(i, j)); col = j; }
      }
    }
    if (col == ncols) {
      tab.drop_row(i);
    } else {
      tab.pivot(i, col);
      ++i;
    }
  }
  for (std::size_t j = 0; j < ncols; ++j)
    if (sf.is_art[j]) allowed[j] = false;
  return true;
}

template <Field S>
void certify(const LinearProgram<S>& lp, const Vec<S>& x) {
  S v = lp_violation(lp, x);
  if constexpr (is_exact_v<S>) {
    if (v != 0) throw std::runtime_error("simplex: exact solution failed re-substitution");
  } else {
    if (!(v <= kCertifySlack)) throw std::runtime_error("simplex: solution failed re-substitution check");
  }
}

}  // namespace

template <Field S>
S lp_violation(const LinearProgram<S>& lp, const Vec<S>& x) {
  S worst{0};
  auto bump = [&](const S& v) {
    if (v > worst) worst = v;
  };
  for (const auto& c : lp.constraints) {
    S lhs = dot(c.coeffs, x);
    switch (c.rel) {
      case Relation::le: bump(lhs - c.rhs); break;
      case Relation::ge: bump(c.rhs - lhs); break;
      case Relation::eq: bump(abs_value<S>(lhs - c.rhs)); break;
    }
  }
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (lp.lower[j]) bump(*lp.lower[j] - x[j]);
    if (lp.upper[j]) bump(x[j] - *lp.upper[j]);
  }
  return worst;
}

template <Field S>
std::optional<Vec<S>> lp_feasible(const LinearProgram<S>& lp, Tolerance tol) {
  auto sf = build(lp);
  std::vector<bool> allowed;
  if (!phase_one(sf, allowed, tol)) return std::nullopt;
  Vec<S> x = extract(sf, lp.num_vars);
  certify(lp, x);
  return x;
}

template <Field S>
LpResult<S> lp_solve(const LinearProgram<S>& lp, Tolerance tol) {
  auto sf = build(lp);
  std::vector<bool> allowed;
  LpResult<S> res;
  if (!phase_one(sf, allowed, tol)) {
    res.status = LpStatus::infeasible;
    return res;
  }
  // Phase 2 minimizes; maximization negates the objective.
  const std::size_t ncols = sf.tab.cols();
  Vec<S> c = zeros<S>(ncols);
  const S dir = lp.sense == Sense::maximize ? S(-1) : S(1);
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    const auto& vm = sf.vars[j];
    c[vm.pos] += dir * lp.objective[j] * vm.pos_sign;
    if (vm.neg) c[*vm.neg] -= dir * lp.objective[j];
  }
  sf.tab.set_costs(c);
  if (!sf.tab.optimize(allowed, tol)) {
    res.status = LpStatus::unbounded;
    return res;
  }
  res.status = LpStatus::optimal;
  res.point = extract(sf, lp.num_vars);
  certify(lp, res.point);
  res.value = dot(lp.objective, res.point);
  return res;
}

template LpResult<double> lp_solve(const LinearProgram<double>&, Tolerance);
template LpResult<Rational> lp_solve(const LinearProgram<Rational>&, Tolerance);
template std::optional<Vec<double>> lp_feasible(const LinearProgram<double>&, Tolerance);
template std::optional<Vec<Rational>> lp_feasible(const LinearProgram<Rational>&, Tolerance);
template double lp_violation(const LinearProgram<double>&, const Vec<double>&);
template Rational lp_violation(const LinearProgram<Rational>&, const Vec<Rational>&);

}  // namespace gptlab
