#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gptlab/linalg.hpp"

namespace gptlab {

enum class Relation { le, eq, ge };
enum class Sense { minimize, maximize };
enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus s);

template <Field S>
struct LinearConstraint {
  Vec<S> coeffs;
  Relation rel = Relation::le;
  S rhs{0};
};

/// Variables are free unless a bound is set.
template <Field S>
struct LinearProgram {
  std::size_t num_vars = 0;
  Sense sense = Sense::minimize;
  Vec<S> objective;
  std::vector<LinearConstraint<S>> constraints;
  std::vector<std::optional<S>> lower;
  std::vector<std::optional<S>> upper;

  explicit LinearProgram(std::size_t n = 0)
      : num_vars(n), objective(n, S(0)), lower(n), upper(n) {}

  void add(Vec<S> coeffs, Relation rel, S rhs) {
    if (coeffs.size() != num_vars) throw std::invalid_argument("constraint width mismatch");
    constraints.push_back({std::move(coeffs), rel, std::move(rhs)});
  }
  void nonnegative(std::size_t j) { lower[j] = S(0); }
  void all_nonnegative() {
    for (std::size_t j = 0; j < num_vars; ++j) lower[j] = S(0);
  }
};

template <Field S>
struct LpResult {
  LpStatus status = LpStatus::infeasible;
  S value{0};
  Vec<S> point;

  bool optimal() const { return status == LpStatus::optimal; }
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule.
/// The optimal point is re-substituted into every constraint and bound before
/// it is returned; a certification failure throws std::runtime_error.
template <Field S>
LpResult<S> lp_solve(const LinearProgram<S>& lp, Tolerance tol = {});

/// Phase-1 only. Returns a witness point when feasible.
template <Field S>
std::optional<Vec<S>> lp_feasible(const LinearProgram<S>& lp, Tolerance tol = {});

/// Max absolute violation of constraints and bounds at `x`.
template <Field S>
S lp_violation(const LinearProgram<S>& lp, const Vec<S>& x);

}  // namespace gptlab
