#pragma once

#include <json.hpp>
#include <string>
#include <variant>

#include "gptlab/compat.hpp"
#include "gptlab/verify.hpp"

namespace gptlab {

using Json = nlohmann::ordered_json;

/// Exact when every coordinate is an integer or a "p/q" string; float otherwise.
using AnyTheory = std::variant<Theory<double>, Theory<Rational>>;

template <Field S>
Json scalar_to_json(const S& x);

template <Field S>
S scalar_from_json(const Json& j);

template <Field S>
Json vec_to_json(const Vec<S>& v);

template <Field S>
Vec<S> vec_from_json(const Json& j);

/// {"name", "dim", "vertices", "unit_effect"}, optional "gram". "dim" is the length of each
/// coordinate vector.
AnyTheory theory_from_json(const Json& j);

template <Field S>
Json theory_to_json(const Theory<S>& t);

/// "polygon:n", "psi:n", "disc:m", "classical:N", or a path to a theory JSON file.
AnyTheory resolve_theory(const std::string& spec);

Json read_json_file(const std::string& path);

/// {"effects": [[...], ...], "metric": {"labels": [...], "distances": [[...]]}}; metric optional.
template <Field S>
Measurement<S> measurement_from_json(const Json& j);

template <Field S>
Json measurement_to_json(const Measurement<S>& m);

/// {"grid": [[[...], ...], ...]} indexed [a][b].
template <Field S>
JointMeasurement<S> joint_from_json(const Json& j);

template <Field S>
Json joint_to_json(const JointMeasurement<S>& j);

Json report_to_json(const VerificationReport& r);
Json battery_to_json(const BatteryResult& r);

}  // namespace gptlab
