#pragma once

#include <climits>
#include <optional>
#include <utility>
#include <vector>

#include "gptlab/model.hpp"

namespace gptlab {

/// Effects m_ab on an |A| x |B| grid; nonnegative on vertices and summing to u.
template <Field S>
struct JointMeasurement {
  std::vector<std::vector<Vec<S>>> grid;

  std::size_t rows() const { return grid.size(); }
  std::size_t cols() const { return grid.empty() ? 0 : grid.front().size(); }
};

template <Field S>
MeasurementCheck validate_joint(const Theory<S>& t, const JointMeasurement<S>& j);

/// (sum_b m_ab, sum_a m_ab).
template <Field S>
std::pair<Measurement<S>, Measurement<S>> marginals(const JointMeasurement<S>& j);

template <Field S>
struct CompatResult {
  bool compatible = false;
  std::optional<JointMeasurement<S>> witness;
};

template <Field S>
CompatResult<S> is_jointly_measurable(const Theory<S>& t, const Measurement<S>& f, const Measurement<S>& g);

template <Field S>
struct MurResult {
  S value;          // t_f + t_g
  S t_f;
  S t_g;
  JointMeasurement<S> joint;
};

/// min over joints of D_inf(M^F, F) + D_inf(M^G, G), one LP.
template <Field S>
MurResult<S> min_mur_linf(const Theory<S>& t, const Measurement<S>& f, const Measurement<S>& g);

template <Field S>
struct FuzzResult {
  S lambda;
  JointMeasurement<S> joint;
};

/// Largest lambda with fuzzify(F, lambda), fuzzify(G, lambda) jointly measurable, one LP.
/// Binary F and G only.
template <Field S>
FuzzResult<S> max_fuzz_lambda(const Theory<S>& t, const Measurement<S>& f, const Measurement<S>& g);

/// max over vertices of (max_a f_a + max_b g_b) - 1. Binary F and G only.
template <Field S>
S degree_bound_rhs(const Theory<S>& t, const Measurement<S>& f, const Measurement<S>& g);

/// Stand-in for n = infinity in degree_bound_closed_form.
inline constexpr int kPolygonInfinity = INT_MAX;

/// r_n^2 / sqrt 2 for n = 4 mod 8, 1 / sqrt 2 for n = 0 mod 8 or kPolygonInfinity.
double degree_bound_closed_form(int n);

}  // namespace gptlab
