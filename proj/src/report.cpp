#include "gptlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gptlab/ideal.hpp"
#include "gptlab/symmetry.hpp"
#include "gptlab/uncertainty.hpp"

namespace gptlab {

namespace {

constexpr double kValueTol = 1e-9;
constexpr double kGramTol = 1e-12;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct Builder {
  Report rep;
  Json failures = Json::array();

  void row(std::string check, const std::string& theory, int n, double param, double lhs, double rhs, bool pass) {
    rep.rows.push_back({std::move(check), theory, n, param, lhs, rhs, pass});
    rep.all_pass = rep.all_pass && pass;
  }

  void battery(const std::string& check, const std::string& theory, int n, const BatteryResult& b) {
    row(check, theory, n, 0, static_cast<double>(b.runs - b.failures), static_cast<double>(b.runs), b.failures == 0);
    for (const auto& f : b.failed) failures.push_back(report_to_json(f));
  }
};

bool wants(const std::vector<std::string>& checks, const std::string& c) {
  return std::find(checks.begin(), checks.end(), c) != checks.end();
}

void structural_checks(Builder& b, const std::vector<std::string>& checks, const Theory<double>& t, int n,
                       bool expect_self_dual) {
  if (wants(checks, "self_dual")) {
    const bool sd = is_self_dual(t);
    b.row("self_dual", t.name, n, 0, sd ? 1 : 0, expect_self_dual ? 1 : 0, sd == expect_self_dual);
  }
  if (wants(checks, "averaged_gram")) {
    const auto a = averaged_inner_product(automorphism_group(t));
    const double dev = max_abs(a - Matrix<double>::identity(t.dim()));
    b.row("averaged_gram", t.name, n, 0, dev, kGramTol, dev < kGramTol);
  }
}

}  // namespace

Report run_report(const Json& config, std::optional<std::uint64_t> seed_override) {
  if (config.value("schema", 1) != 1) throw std::invalid_argument("report config: unsupported schema");
  const std::uint64_t seed = seed_override.value_or(config.value("seed", std::uint64_t{1}));
  const auto polygons = config.value("polygons", std::vector<int>{});
  const auto classical = config.value("classical", std::vector<int>{});
  const std::vector<std::string> all_checks{"self_dual", "averaged_gram", "degree_bound", "min_le_sum", "max_lambda",
                                            "min_mur_linf", "thm1", "cor1", "thm2", "thm3", "propC"};
  const auto checks = config.value("checks", all_checks);
  BatterySpec spec;
  spec.joints = config.value("joints", std::size_t{10});
  spec.eps_grid = config.value("epsilons", spec.eps_grid);
  spec.seed = seed;
  const auto propc_samples = config.value("propc_samples", std::size_t{10});
  const auto propc_eps = config.value("propc_epsilons", std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});

  Builder b;
  for (int n : polygons) {
    const auto raw = make_polygon(n);
    structural_checks(b, checks, raw, n, n % 2 == 1);
    const Theory<double> work = n % 2 == 0 ? psi_transform(raw) : raw;

    if (n % 4 == 0) {
      const auto [f, g] = perpendicular_ideal_pair(work);
      const double closed = degree_bound_closed_form(n);
      const double drhs = degree_bound_rhs(work, f, g);
      const double le = min_le_sum(work, f, g).value;
      const double lam = max_fuzz_lambda(work, f, g).lambda;
      const double mur = min_mur_linf(work, f, g).value;
      if (wants(checks, "degree_bound"))
        b.row("degree_bound", work.name, n, 0, drhs, closed, std::abs(drhs - closed) <= kValueTol);
      if (wants(checks, "min_le_sum"))
        b.row("min_le_sum", work.name, n, 0, le, 1 - closed, std::abs(le - (1 - closed)) <= kValueTol);
      if (wants(checks, "max_lambda"))
        b.row("max_lambda", work.name, n, drhs, lam, 0.5, lam >= 0.5 - kValueTol && lam <= drhs + kValueTol);
      if (wants(checks, "min_mur_linf")) b.row("min_mur_linf", work.name, n, 0, mur, le, mur >= le - kValueTol);
      b.rep.plot.push_back({static_cast<double>(n), le, drhs, closed, lam, mur});
    }

    spec.seed = seed + static_cast<std::uint64_t>(n);
    if (n % 2 == 1) {
      if (wants(checks, "thm1") || wants(checks, "cor1") || wants(checks, "thm2")) {
        const auto tb = run_theorem_battery(work, spec);
        if (wants(checks, "thm1")) b.battery("thm1", work.name, n, tb.thm1);
        if (wants(checks, "cor1")) b.battery("cor1", work.name, n, tb.cor1);
        if (wants(checks, "thm2")) b.battery("thm2", work.name, n, tb.thm2);
      }
    } else if (wants(checks, "thm3")) {
      b.battery("thm3", raw.name, n, run_even_battery(raw, spec));
    }
    if (wants(checks, "propC")) b.battery("propC", work.name, n, run_propC_battery(work, propc_samples, propc_eps, seed + n));
  }

  for (int level : classical) {
    const auto exact = make_classical<Rational>(level);
    const auto t = to_double(exact);
    if (wants(checks, "self_dual")) {
      const bool sd = is_self_dual(exact);
      b.row("self_dual", t.name, level, 0, sd ? 1 : 0, 1, sd);
    }
    if (wants(checks, "averaged_gram")) {
      const auto a = averaged_inner_product(automorphism_group(exact));
      const bool id = a == Matrix<Rational>::identity(exact.dim());
      b.row("averaged_gram", t.name, level, 0, id ? 0 : 1, kGramTol, id);
    }
    const auto canon = canonicalize(t).theory;
    spec.seed = seed + 1000 + static_cast<std::uint64_t>(level);
    if (wants(checks, "thm1") || wants(checks, "cor1") || wants(checks, "thm2")) {
      const auto tb = run_theorem_battery(canon, spec);
      if (wants(checks, "thm1")) b.battery("thm1", canon.name, level, tb.thm1);
      if (wants(checks, "cor1")) b.battery("cor1", canon.name, level, tb.cor1);
      if (wants(checks, "thm2")) b.battery("thm2", canon.name, level, tb.thm2);
    }
    if (wants(checks, "propC"))
      b.battery("propC", canon.name, level, run_propC_battery(canon, propc_samples, propc_eps, seed + 1000 + level));
  }

  Json rows = Json::array();
  for (const auto& r : b.rep.rows)
    rows.push_back({{"check", r.check},
                    {"theory", r.theory},
                    {"n", r.n},
                    {"param", r.param},
                    {"lhs", r.lhs},
                    {"rhs", r.rhs},
                    {"verdict", r.pass ? "pass" : "fail"}});
  b.rep.json = {{"schema", 1}, {"seed", seed}, {"config", config}, {"rows", rows}, {"failures", b.failures},
                {"verdict", b.rep.all_pass ? "pass" : "fail"}};
  return b.rep;
}

std::string summary_csv(const Report& r) {
  std::ostringstream out;
  out << "check,theory,n,param,lhs,rhs,verdict\n";
  for (const auto& row : r.rows)
    out << row.check << ',' << row.theory << ',' << row.n << ',' << num(row.param) << ',' << num(row.lhs) << ','
        << num(row.rhs) << ',' << (row.pass ? "pass" : "fail") << '\n';
  return out.str();
}

void write_report(const Report& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ofstream(base / "report.json") << r.json.dump(2) << '\n';
  std::ofstream(base / "summary.csv") << summary_csv(r);
  std::ofstream plot(base / "plot_data.csv");
  plot << "n,min_le_sum,degree_bound_rhs,degree_bound_closed_form,max_fuzz_lambda,min_mur_linf\n";
  for (const auto& p : r.plot) {
    for (std::size_t i = 0; i < p.size(); ++i) plot << (i ? "," : "") << num(p[i]);
    plot << '\n';
  }
}

}  // namespace gptlab
