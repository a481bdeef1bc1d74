#pragma once

#include <utility>
#include <vector>

#include "gptlab/model.hpp"

namespace gptlab {

/// e_i = w_i / |w_0|^2 under the averaged product, one per vertex. Requires a transitive theory
/// that is self-dual under its own pairing with that pairing equal to the averaged product.
/// A psi-represented even polygon instead yields 1/2 (cos((2i-1) pi/n), sin((2i-1) pi/n), 1).
template <Field S>
std::vector<Vec<S>> indecomposable_pure_effects(const Theory<S>& t);

/// Each outcome is either a sum of pure indecomposable effects or the unit minus such a sum.
template <Field S>
struct IdealMeasurement {
  Measurement<S> measurement;
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<bool> complemented;
};

/// All ideal measurements with 2..max_outcomes outcomes, each multiset of effects once.
template <Field S>
std::vector<IdealMeasurement<S>> enumerate_ideal_measurements(const Theory<S>& t, std::size_t max_outcomes);

/// f / <u, f>; throws TheoryError when that point is not a state. With `require_sharp`,
/// also requires f to evaluate to 1 there.
template <Field S>
Vec<S> eigenstate(const Theory<S>& t, const Vec<S>& f, bool require_sharp = false);

/// lambda f_a + (1 - lambda) u / |A|, lambda in [0, 1].
template <Field S>
Measurement<S> fuzzify(const Measurement<S>& m, const S& lambda);

/// psi = diag(r, r, 1) for the n-gon radius r.
Matrix<double> psi_matrix(int n);

/// Even polygon -> psi-representation (vertices scaled to radius r^2). Odd n throws.
Theory<double> psi_transform(const Theory<double>& t);

/// Inverse of psi_transform.
Theory<double> psi_inverse_transform(const Theory<double>& t);

/// Effect covector in psi-representation: psi^{-1} e.
Vec<double> psi_effect(int n, const Vec<double>& e);
Measurement<double> psi_measurement(int n, const Measurement<double>& m);

/// Raw even-polygon effect 1/2 (r cos((2i-1) pi/n), r sin((2i-1) pi/n), 1).
Vec<double> even_polygon_effect(int n, int i);
/// psi-representation effect 1/2 (cos((2i-1) pi/n), sin((2i-1) pi/n), 1).
Vec<double> psi_polygon_effect(int n, int i);
/// Raw odd-polygon effect (r cos(2 pi i/n), r sin(2 pi i/n), 1) / (1 + r^2).
Vec<double> odd_polygon_effect(int n, int i);

/// Binary ideal pair whose effect directions differ by pi/2; n must be a multiple of 4.
/// For a psi-represented polygon the effects are in psi coordinates; for a raw polygon, raw ones.
std::pair<Measurement<double>, Measurement<double>> perpendicular_ideal_pair(const Theory<double>& t);

}  // namespace gptlab
