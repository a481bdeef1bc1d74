#include "gptlab/io.hpp"

#include <fstream>
#include <stdexcept>

#include "gptlab/ideal.hpp"

namespace gptlab {

template <Field S>
Json scalar_to_json(const S& x) {
  if constexpr (is_exact_v<S>) {
    if (x.get_den() == 1) return Json(x.get_num().get_si());
    return Json(x.get_str());
  } else {
    return Json(x);
  }
}

template <Field S>
S scalar_from_json(const Json& j) {
  if (j.is_string()) return parse_scalar<S>(j.get<std::string>());
  if (j.is_number_integer()) return from_int<S>(j.get<long>());
  if (j.is_number()) {
    if constexpr (is_exact_v<S>) {
      throw std::invalid_argument("decimal literal in an exact theory");
    } else {
      return j.get<double>();
    }
  }
  throw std::invalid_argument("expected a number or a \"p/q\" string");
}

template <Field S>
Json vec_to_json(const Vec<S>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(scalar_to_json(x));
  return a;
}

template <Field S>
Vec<S> vec_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a coordinate array");
  Vec<S> v;
  for (const auto& x : j) v.push_back(scalar_from_json<S>(x));
  return v;
}

namespace {

bool all_exact(const Json& j) {
  if (j.is_array()) {
    for (const auto& x : j)
      if (!all_exact(x)) return false;
    return true;
  }
  return j.is_number_integer() || j.is_string();
}

template <Field S>
Theory<S> theory_from_json_as(const Json& j) {
  std::vector<Vec<S>> verts;
  for (const auto& v : j.at("vertices")) verts.push_back(vec_from_json<S>(v));
  Vec<S> unit = vec_from_json<S>(j.at("unit_effect"));
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != unit.size())
    throw TheoryError("\"dim\" does not match the coordinate length");
  std::optional<InnerProduct<S>> inner;
  if (j.contains("gram")) {
    std::vector<Vec<S>> rows;
    for (const auto& r : j.at("gram")) rows.push_back(vec_from_json<S>(r));
    inner = InnerProduct<S>(Matrix<S>::from_rows(rows));
  }
  return make_theory<S>(j.value("name", std::string("user")), std::move(verts), std::move(unit), inner);
}

}  // namespace

AnyTheory theory_from_json(const Json& j) {
  const bool exact = all_exact(j.at("vertices")) && all_exact(j.at("unit_effect")) &&
                     (!j.contains("gram") || all_exact(j.at("gram")));
  if (exact) return theory_from_json_as<Rational>(j);
  return theory_from_json_as<double>(j);
}

template <Field S>
Json theory_to_json(const Theory<S>& t) {
  Json j;
  j["name"] = t.name;
  j["dim"] = t.dim();
  Json verts = Json::array();
  for (const auto& v : t.vertices) verts.push_back(vec_to_json(v));
  j["vertices"] = verts;
  j["unit_effect"] = vec_to_json(t.unit);
  if (!(t.inner.gram() == Matrix<S>::identity(t.dim()))) {
    Json g = Json::array();
    for (std::size_t i = 0; i < t.dim(); ++i) g.push_back(vec_to_json(t.inner.gram().row(i)));
    j["gram"] = g;
  }
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return Json::parse(in);
}

AnyTheory resolve_theory(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string family = spec.substr(0, colon);
    const int param = std::stoi(spec.substr(colon + 1));
    if (family == "polygon") return make_polygon(param);
    if (family == "psi") return psi_transform(make_polygon(param));
    if (family == "disc") return make_disc_approx(param);
    if (family == "classical") return make_classical<Rational>(param);
    throw std::invalid_argument("unknown theory family: " + family);
  }
  return theory_from_json(read_json_file(spec));
}

template <Field S>
Measurement<S> measurement_from_json(const Json& j) {
  Measurement<S> m;
  for (const auto& e : j.at("effects")) m.effects.push_back(vec_from_json<S>(e));
  if (j.contains("metric")) {
    const auto& mj = j.at("metric");
    std::vector<Vec<S>> rows;
    for (const auto& r : mj.at("distances")) rows.push_back(vec_from_json<S>(r));
    std::vector<std::string> labels;
    if (mj.contains("labels")) {
      labels = mj.at("labels").get<std::vector<std::string>>();
    } else {
      for (std::size_t i = 0; i < rows.size(); ++i) labels.push_back(std::to_string(i));
    }
    m.metric = FiniteMetricSpace<S>(std::move(labels), Matrix<S>::from_rows(rows));
  }
  return m;
}

template <Field S>
Json measurement_to_json(const Measurement<S>& m) {
  Json j;
  Json effects = Json::array();
  for (const auto& e : m.effects) effects.push_back(vec_to_json(e));
  j["effects"] = effects;
  if (m.metric) {
    Json d = Json::array();
    for (std::size_t i = 0; i < m.metric->size(); ++i) d.push_back(vec_to_json(m.metric->matrix().row(i)));
    j["metric"] = {{"labels", m.metric->labels()}, {"distances", d}};
  }
  return j;
}

template <Field S>
JointMeasurement<S> joint_from_json(const Json& j) {
  JointMeasurement<S> out;
  for (const auto& row : j.at("grid")) {
    std::vector<Vec<S>> r;
    for (const auto& e : row) r.push_back(vec_from_json<S>(e));
    out.grid.push_back(std::move(r));
  }
  return out;
}

template <Field S>
Json joint_to_json(const JointMeasurement<S>& jm) {
  Json grid = Json::array();
  for (const auto& row : jm.grid) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(vec_to_json(e));
    grid.push_back(r);
  }
  return Json{{"grid", grid}};
}

Json report_to_json(const VerificationReport& r) {
  Json j;
  j["theorem"] = r.theorem;
  j["theory"] = r.theory;
  j["inputs"] = {{"eps", r.eps}};
  if (r.witness) {
    j["witness"] = {{"a", r.witness->a},
                    {"b", r.witness->b},
                    {"weight", r.witness->weight},
                    {"state", vec_to_json(r.witness->state)}};
  } else {
    j["witness"] = nullptr;
  }
  Json ineqs = Json::array();
  for (const auto& q : r.inequalities)
    ineqs.push_back({{"name", q.name}, {"lhs", q.lhs}, {"rhs", q.rhs}, {"holds", q.holds}});
  j["inequalities"] = ineqs;
  j["proof_candidate_passes"] = r.proof_candidate_passes;
  j["verdict"] = r.pass ? "pass" : "fail";
  if (!r.scan.empty()) j["scan"] = r.scan;
  return j;
}

Json battery_to_json(const BatteryResult& r) {
  Json failed = Json::array();
  for (const auto& f : r.failed) failed.push_back(report_to_json(f));
  return {{"runs", r.runs}, {"failures", r.failures}, {"failed", failed}};
}

#define GPTLAB_INSTANTIATE(S)                                          \
  template Json scalar_to_json(const S&);                              \
  template S scalar_from_json(const Json&);                            \
  template Json vec_to_json(const Vec<S>&);                            \
  template Vec<S> vec_from_json(const Json&);                          \
  template Json theory_to_json(const Theory<S>&);                      \
  template Measurement<S> measurement_from_json(const Json&);          \
  template Json measurement_to_json(const Measurement<S>&);            \
  template JointMeasurement<S> joint_from_json(const Json&);           \
  template Json joint_to_json(const JointMeasurement<S>&);

GPTLAB_INSTANTIATE(double)
GPTLAB_INSTANTIATE(Rational)

}  // namespace gptlab
