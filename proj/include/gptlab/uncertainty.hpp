#pragma once

#include <vector>

#include "gptlab/model.hpp"
#include "gptlab/parallel.hpp"

namespace gptlab {

/// Probabilities over the points of a metric space: nonnegative, summing to 1.
template <Field S>
struct OutcomeDistribution {
  std::vector<S> probs;
  FiniteMetricSpace<S> space;

  OutcomeDistribution(std::vector<S> p, FiniteMetricSpace<S> m, Tolerance tol = {});
};

/// {0} together with every 2 d(x, a), sorted and deduplicated.
template <Field S>
std::vector<S> width_candidates(const FiniteMetricSpace<S>& m);

/// Mass of the ball O(a; w) = {x : d(x, a) <= w / 2}.
template <Field S>
S ball_mass(const std::vector<S>& p, const FiniteMetricSpace<S>& m, std::size_t a, const S& w);

/// Smallest candidate width w with some ball O(a; w) of mass >= 1 - eps.
template <Field S>
S overall_width(const OutcomeDistribution<S>& p, const S& eps, Tolerance tol = {});

/// 1 - max_x p(x).
template <Field S>
S localization_error(const std::vector<S>& p);

/// Outcome distribution of m at w; throws TheoryError when w is not a state.
template <Field S>
OutcomeDistribution<S> distribution(const Theory<S>& t, const Measurement<S>& m, const Vec<S>& w);

/// Smallest candidate w such that on every vertex where f_a = 1 the approximating measurement
/// puts mass >= 1 - eps on O(a; w), for all outcomes a. Uses the metric of `ideal`.
template <Field S>
S error_bar_width(const Theory<S>& t, const Measurement<S>& approx, const Measurement<S>& ideal, const S& eps);

/// max over vertices w and 1-Lipschitz h with h(a_0) = 0 of |sum_a h(a) (approx_a - ideal_a)(w)|,
/// one LP pair per vertex.
template <Field S>
S werner_distance(const Theory<S>& t, const Measurement<S>& approx, const Measurement<S>& ideal,
                  Exec exec = Exec::parallel);

/// max over vertices and outcomes of |approx_a(w) - ideal_a(w)|.
template <Field S>
S linf_distance(const Theory<S>& t, const Measurement<S>& approx, const Measurement<S>& ideal);

template <Field S>
struct MinLeSum {
  S value;
  std::size_t vertex = 0;
};

/// min over vertices of LE(F at w) + LE(G at w).
template <Field S>
MinLeSum<S> min_le_sum(const Theory<S>& t, const Measurement<S>& f, const Measurement<S>& g);

}  // namespace gptlab
