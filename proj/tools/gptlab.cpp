#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gptlab/compat.hpp"
#include "gptlab/ideal.hpp"
#include "gptlab/io.hpp"
#include "gptlab/report.hpp"
#include "gptlab/symmetry.hpp"
#include "gptlab/uncertainty.hpp"
#include "gptlab/verify.hpp"

using namespace gptlab;

namespace {

// Exit codes: 0 success or pass, 1 a verification verdict of fail, 2 bad input.
constexpr int kFail = 1;
constexpr int kBadInput = 2;

Theory<double> as_double(const AnyTheory& t) {
  if (const auto* d = std::get_if<Theory<double>>(&t)) return *d;
  return to_double(std::get<Theory<Rational>>(t));
}

std::vector<double> parse_coords(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

bool is_index(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::vector<Measurement<double>> ideal_pool(const Theory<double>& t, std::size_t max_outcomes) {
  std::vector<Measurement<double>> pool;
  for (const auto& im : enumerate_ideal_measurements(t, max_outcomes)) pool.push_back(im.measurement);
  return pool;
}

// Measurement source: a JSON file, an index into the enumerated ideal measurements, or
// "perp" for the perpendicular pair of an even polygon (first for F, second for G).
Measurement<double> resolve_measurement(const Theory<double>& t, const std::string& spec, bool second,
                                        std::size_t max_outcomes) {
  if (spec == "perp") {
    const auto pairs = perpendicular_ideal_pair(t);
    return second ? pairs.second : pairs.first;
  }
  if (is_index(spec)) {
    const auto pool = ideal_pool(t, max_outcomes);
    const auto k = std::stoul(spec);
    if (k >= pool.size())
      throw std::invalid_argument("measurement index " + spec + " out of range (" + std::to_string(pool.size()) +
                                  " ideal measurements)");
    return pool[k];
  }
  return measurement_from_json<double>(read_json_file(spec));
}

// Joint source: a JSON file, "optimal" (the MUR-optimal joint), "fuzz:lambda" (an LP witness
// for the fuzzified pair), or "random:k" (draw k of the seeded random-joint family).
JointMeasurement<double> resolve_joint(const Theory<double>& t, const Measurement<double>& f,
                                       const Measurement<double>& g, const std::string& spec, std::uint64_t seed,
                                       std::size_t max_outcomes) {
  if (spec == "optimal") return min_mur_linf(t, f, g).joint;
  if (starts_with(spec, "fuzz:")) {
    const double lambda = std::stod(spec.substr(5));
    const auto r = is_jointly_measurable(t, fuzzify(f, lambda), fuzzify(g, lambda));
    if (!r.compatible) throw std::invalid_argument("fuzzified pair at lambda " + spec.substr(5) + " is incompatible");
    return *r.witness;
  }
  if (starts_with(spec, "random:")) {
    auto rng = rng_for(seed, std::stoull(spec.substr(7)));
    auto pool = ideal_pool(t, max_outcomes);
    pool.push_back(f);
    pool.push_back(g);
    return random_joint(t, f, g, pool, rng);
  }
  return joint_from_json<double>(read_json_file(spec));
}

Vec<double> resolve_state(const Theory<double>& t, const std::string& spec) {
  if (spec == "mixed") return maximally_mixed(t, automorphism_group(t));
  if (starts_with(spec, "vertex:")) {
    const auto k = std::stoul(spec.substr(7));
    if (k >= t.num_vertices()) throw std::invalid_argument("vertex index out of range");
    return t.vertices[k];
  }
  return parse_coords(spec);
}

template <Field S>
Json analyze(const Theory<S>& t, bool emit_canonical) {
  Json j;
  j["name"] = t.name;
  j["kind"] = to_string(t.kind);
  j["exact"] = std::is_same_v<S, Rational>;
  j["dim"] = t.dim();
  j["num_vertices"] = t.num_vertices();
  const auto g = automorphism_group(t);
  j["automorphism_order"] = g.order();
  const bool transitive = is_transitive(g, t.num_vertices());
  j["transitive"] = transitive;
  const auto avg = averaged_inner_product(g);
  j["self_dual_euclidean"] = is_self_dual(t);
  j["self_dual_averaged"] = is_self_dual(t, avg);
  j["averaged_gram_deviation"] = to_double(max_abs(avg - Matrix<S>::identity(t.dim())));
  if (transitive) j["maximally_mixed"] = vec_to_json(maximally_mixed(t, g));
  if (emit_canonical) {
    if (!transitive) throw TheoryError("canonical form needs a transitive theory");
    Theory<double> td;
    if constexpr (std::is_same_v<S, Rational>) {
      td = to_double(t);
    } else {
      td = t;
    }
    j["canonical"] = theory_to_json(canonicalize(td).theory);
  }
  return j;
}

Json distribution_json(const Theory<double>& t, const Measurement<double>& m, const Vec<double>& w, double eps) {
  const auto d = distribution(t, m, w);
  return {{"probabilities", d.probs},
          {"localization_error", localization_error(d.probs)},
          {"overall_width", overall_width(d, eps)},
          {"eps", eps}};
}

Json mur_json(const MurResult<double>& r) {
  return {{"value", r.value}, {"t_f", r.t_f}, {"t_g", r.t_g}, {"joint", joint_to_json(r.joint)}};
}

struct Inputs {
  std::string theory;
  std::string f = "0";
  std::string g = "1";
  std::string joint = "optimal";
  std::string approx;
  std::size_t max_outcomes = 2;
  std::uint64_t seed = 1;
};

void add_theory(CLI::App* cmd, Inputs& in) {
  cmd->add_option("theory", in.theory, "polygon:n, psi:n, disc:m, classical:N or a theory JSON file")->required();
}

void add_pair(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--f", in.f, "first measurement: JSON file, ideal index, or perp")->capture_default_str();
  cmd->add_option("--g", in.g, "second measurement: JSON file, ideal index, or perp")->capture_default_str();
  cmd->add_option("--max-outcomes", in.max_outcomes, "outcome bound for ideal indices")->capture_default_str();
}

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polytopic GPT toolkit: state spaces, ideal measurements, uncertainty relations"};
  app.require_subcommand(1);
  Inputs in;
  int exit_code = 0;

  // theory analyze
  auto* theory = app.add_subcommand("theory", "inspect a state space");
  theory->require_subcommand(1);
  auto* analyze_cmd = theory->add_subcommand("analyze", "symmetry group, self-duality, canonical form");
  add_theory(analyze_cmd, in);
  bool emit_canonical = false;
  analyze_cmd->add_flag("--canonical", emit_canonical, "include the canonicalized theory");
  analyze_cmd->callback([&] {
    const auto t = resolve_theory(in.theory);
    print(std::visit([&](const auto& th) { return analyze(th, emit_canonical); }, t));
  });

  // measurements list
  auto* meas = app.add_subcommand("measurements", "ideal measurements of a theory");
  meas->require_subcommand(1);
  auto* list_cmd = meas->add_subcommand("list", "enumerate ideal measurements");
  add_theory(list_cmd, in);
  list_cmd->add_option("--max-outcomes", in.max_outcomes, "largest outcome count")->capture_default_str();
  list_cmd->callback([&] {
    const auto t = as_double(resolve_theory(in.theory));
    Json out = Json::array();
    const auto ms = enumerate_ideal_measurements(t, in.max_outcomes);
    for (std::size_t k = 0; k < ms.size(); ++k) {
      Json m = measurement_to_json(ms[k].measurement);
      m["index"] = k;
      m["subsets"] = ms[k].subsets;
      out.push_back(m);
    }
    print(out);
  });

  // measure
  auto* measure = app.add_subcommand("measure", "outcome statistics and distances to an ideal measurement");
  add_theory(measure, in);
  std::string measurement = "0";
  std::string state = "mixed";
  std::optional<std::string> ideal;
  double measure_eps = 0.1;
  measure->add_option("--measurement", measurement, "JSON file, ideal index, or perp")->capture_default_str();
  measure->add_option("--state", state, "comma-separated coordinates, vertex:i, or mixed")->capture_default_str();
  measure->add_option("--eps", measure_eps, "overall-width and error-bar level")->capture_default_str();
  measure->add_option("--ideal", ideal, "ideal reference: report Werner, l-infinity and error-bar distances");
  measure->add_option("--max-outcomes", in.max_outcomes, "outcome bound for ideal indices")->capture_default_str();
  measure->callback([&] {
    const auto t = as_double(resolve_theory(in.theory));
    const auto m = resolve_measurement(t, measurement, false, in.max_outcomes);
    const auto check = validate_measurement(t, m);
    if (!check.ok) throw std::invalid_argument("invalid measurement: " + check.failure);
    Json out = distribution_json(t, m, resolve_state(t, state), measure_eps);
    if (ideal) {
      const auto fi = resolve_measurement(t, *ideal, false, in.max_outcomes);
      out["werner_distance"] = werner_distance(t, m, fi);
      out["linf_distance"] = linf_distance(t, m, fi);
      out["error_bar_width"] = error_bar_width(t, m, fi, measure_eps);
    }
    print(out);
  });

  // compat joint|mur|fuzz|degree
  auto* compat = app.add_subcommand("compat", "joint measurability and incompatibility measures");
  compat->require_subcommand(1);
  auto* joint_cmd = compat->add_subcommand("joint", "LP feasibility of a joint measurement");
  auto* mur_cmd = compat->add_subcommand("mur", "minimal l-infinity error sum over joints");
  auto* fuzz_cmd = compat->add_subcommand("fuzz", "largest jointly measurable fuzzing, binary pairs");
  auto* degree_cmd = compat->add_subcommand("degree", "fuzzing threshold with the dual-vertex upper bound");
  for (auto* c : {joint_cmd, mur_cmd, fuzz_cmd, degree_cmd}) {
    add_theory(c, in);
    add_pair(c, in);
  }
  auto pair_of = [&](const Theory<double>& t) {
    return std::pair{resolve_measurement(t, in.f, false, in.max_outcomes),
                     resolve_measurement(t, in.g, true, in.max_outcomes)};
  };
  joint_cmd->callback([&] {
    const auto t = as_double(resolve_theory(in.theory));
    const auto [f, g] = pair_of(t);
    const auto r = is_jointly_measurable(t, f, g);
    Json out{{"compatible", r.compatible}};
    if (r.witness) out["joint"] = joint_to_json(*r.witness);
    print(out);
  });
  mur_cmd->callback([&] {
    const auto t = as_double(resolve_theory(in.theory));
    const auto [f, g] = pair_of(t);
    Json out = mur_json(min_mur_linf(t, f, g));
    out["min_le_sum"] = min_le_sum(t, f, g).value;
    print(out);
  });
  fuzz_cmd->callback([&] {
    const auto t = as_double(resolve_theory(in.theory));
    const auto [f, g] = pair_of(t);
    const auto r = max_fuzz_lambda(t, f, g);
    print({{"lambda", r.lambda}, {"joint", joint_to_json(r.joint)}});
  });
  degree_cmd->callback([&] {
    const auto t = as_double(resolve_theory(in.theory));
    const auto [f, g] = pair_of(t);
    Json out{{"lambda", max_fuzz_lambda(t, f, g).lambda}, {"degree_bound_rhs", degree_bound_rhs(t, f, g)}};
    if (t.kind == TheoryKind::polygon || t.kind == TheoryKind::psi_polygon) {
      if (t.param % 4 == 0) out["closed_form"] = degree_bound_closed_form(t.param);
    }
    print(out);
  });

  // verify thm1|cor1|thm2|thm3|propC
  auto* verify = app.add_subcommand("verify", "check an uncertainty relation on one input or a seeded battery");
  verify->require_subcommand(1);
  double eps1 = 0.2;
  double eps2 = 0.2;
  std::string even_mode = "thm2";
  bool battery = false;
  BatterySpec spec;
  std::vector<double> propc_eps{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::size_t propc_samples = 50;
  std::map<std::string, CLI::App*> verify_cmds;
  for (const std::string name : {"thm1", "cor1", "thm2", "thm3", "propC"}) {
    auto* c = verify->add_subcommand(name);
    add_theory(c, in);
    add_pair(c, in);
    c->add_option("--seed", in.seed, "seed for random joints and batteries")->capture_default_str();
    c->add_flag("--battery", battery, "run the seeded randomized battery instead of one input");
    if (name == "propC") {
      c->add_option("--approx", in.approx, "approximation of F: JSON file, ideal index, or fuzz:lambda")->required();
      c->add_option("--eps", propc_eps, "eps grid in (0, 1]")->capture_default_str();
      c->add_option("--samples", propc_samples, "battery size")->capture_default_str();
    } else {
      c->add_option("--joint", in.joint, "JSON file, optimal, fuzz:lambda, or random:k")->capture_default_str();
      c->add_option("--joints", spec.joints, "battery size")->capture_default_str();
      if (name != "thm2") {
        c->add_option("--eps1", eps1)->capture_default_str();
        c->add_option("--eps2", eps2)->capture_default_str();
      }
      if (name == "thm3")
        c->add_option("--mode", even_mode, "delegated check")
            ->check(CLI::IsMember({"thm1", "cor1", "thm2"}))
            ->capture_default_str();
    }
    verify_cmds[name] = c;
  }
  auto finish = [&](const Json& j, bool pass) {
    print(j);
    if (!pass) exit_code = kFail;
  };
  for (const auto& [name, cmd] : verify_cmds) {
    cmd->callback([&, name = name] {
      const auto t = as_double(resolve_theory(in.theory));
      spec.seed = in.seed;
      spec.max_outcomes = in.max_outcomes;
      if (battery) {
        if (name == "thm3") {
          const auto r = run_even_battery(t, spec);
          finish(battery_to_json(r), r.failures == 0);
        } else if (name == "propC") {
          const auto r = run_propC_battery(t, propc_samples, propc_eps, in.seed);
          finish(battery_to_json(r), r.failures == 0);
        } else {
          spec.eps_grid = {eps1};
          if (eps2 != eps1) spec.eps_grid.push_back(eps2);
          const auto tb = run_theorem_battery(t, spec);
          const auto& r = name == "thm1" ? tb.thm1 : name == "cor1" ? tb.cor1 : tb.thm2;
          finish(battery_to_json(r), r.failures == 0);
        }
        return;
      }
      const auto [f, g] = pair_of(t);
      if (name == "propC") {
        const auto approx = starts_with(in.approx, "fuzz:")
                                ? fuzzify(f, std::stod(in.approx.substr(5)))
                                : resolve_measurement(t, in.approx, false, in.max_outcomes);
        Json reports = Json::array();
        bool pass = true;
        for (double e : propc_eps) {
          const auto r = verify_propC(t, approx, f, e);
          pass = pass && r.pass;
          reports.push_back(report_to_json(r));
        }
        finish(reports, pass);
        return;
      }
      const auto j = resolve_joint(t, f, g, in.joint, in.seed, in.max_outcomes);
      VerificationReport r;
      if (name == "thm1") {
        r = verify_thm1(t, f, g, j, eps1, eps2);
      } else if (name == "cor1") {
        r = verify_cor1(t, f, g, j, eps1, eps2);
      } else if (name == "thm2") {
        r = verify_thm2(t, f, g, j);
      } else {
        const EvenCheck mode = even_mode == "thm1" ? EvenCheck::thm1
                               : even_mode == "cor1" ? EvenCheck::cor1
                                                     : EvenCheck::thm2;
        r = verify_thm3_even(t, f, g, j, mode, eps1, eps2);
      }
      finish(report_to_json(r), r.pass);
    });
  }

  // report run
  auto* report = app.add_subcommand("report", "batch reports");
  report->require_subcommand(1);
  auto* run_cmd = report->add_subcommand("run", "run a configured battery and write report files");
  std::string config_path;
  std::optional<std::uint64_t> report_seed;
  std::string out_dir = "report";
  run_cmd->add_option("--config", config_path, "battery config JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", report_seed, "overrides the config seed");
  run_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
  run_cmd->callback([&] {
    const auto r = run_report(read_json_file(config_path), report_seed);
    write_report(r, out_dir);
    std::cout << summary_csv(r);
    if (!r.all_pass) exit_code = kFail;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return exit_code;
}
