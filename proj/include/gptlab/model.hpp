#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gptlab/geometry.hpp"
#include "gptlab/metric.hpp"

namespace gptlab {

/// Raised when a theory or measurement violates a structural invariant.
class TheoryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TheoryKind { user, classical, polygon, disc_approx, psi_polygon };

std::string to_string(TheoryKind k);

/// Polytopic theory: the state space is the convex hull of `vertices`, which lie on the
/// hyperplane <unit, w> = 1 off the origin. Every listed vertex is extreme.
template <Field S>
struct Theory {
  std::string name;
  TheoryKind kind = TheoryKind::user;
  int param = 0;  // N for classical, n for polygon families
  std::vector<Vec<S>> vertices;
  Vec<S> unit;
  InnerProduct<S> inner;
  ConeV<S> cone;
  bool canonicalized = false;
  Tolerance tol;

  std::size_t dim() const { return unit.size(); }
  std::size_t num_vertices() const { return vertices.size(); }
};

/// Validates and assembles a theory; throws TheoryError naming the failed invariant.
/// Defaults to the Euclidean pairing.
template <Field S>
Theory<S> make_theory(std::string name, std::vector<Vec<S>> vertices, Vec<S> unit,
                      std::optional<InnerProduct<S>> inner = std::nullopt, Tolerance tol = {});

/// Classical N-level system: standard basis vertices, unit effect (1, ..., 1). N >= 1.
template <Field S>
Theory<S> make_classical(int n_levels_minus_one);

/// sqrt(1 / cos(pi / n)), the circumradius normalizing regular n-gons.
double polygon_radius(int n);

/// Regular n-gon, vertices (r cos(2 pi i / n), r sin(2 pi i / n), 1), unit (0, 0, 1). n >= 3.
Theory<double> make_polygon(int n);

/// Polygon with m >= 8 sides standing in for the disc.
Theory<double> make_disc_approx(int m);

Theory<double> to_double(const Theory<Rational>& t);

/// A collection of effects summing to the unit effect, with optional outcome metric.
template <Field S>
struct Measurement {
  std::vector<Vec<S>> effects;
  std::optional<FiniteMetricSpace<S>> metric;

  std::size_t size() const { return effects.size(); }
  /// The attached metric, or the discrete metric when none is set.
  FiniteMetricSpace<S> outcome_metric() const {
    return metric ? *metric : FiniteMetricSpace<S>::discrete(effects.size());
  }
};

Measurement<double> to_double(const Measurement<Rational>& m);

struct MeasurementCheck {
  bool ok = true;
  std::string failure;
};

/// <e, w> under the theory pairing, without any membership check.
template <Field S>
S pair(const Theory<S>& t, const Vec<S>& e, const Vec<S>& w);

/// w in Omega via convex-combination LP over the vertices.
template <Field S>
bool in_state_space(const Theory<S>& t, const Vec<S>& w);

/// e(w); throws TheoryError when w is not a state.
template <Field S>
S effect_eval(const Theory<S>& t, const Vec<S>& e, const Vec<S>& w);

/// 0 <= e(w) <= 1 at every vertex.
template <Field S>
bool is_valid_effect(const Theory<S>& t, const Vec<S>& e);

template <Field S>
MeasurementCheck validate_measurement(const Theory<S>& t, const Measurement<S>& m);

/// Outcome probabilities of m at w, unchecked.
template <Field S>
std::vector<S> probabilities(const Theory<S>& t, const Measurement<S>& m, const Vec<S>& w);

}  // namespace gptlab
