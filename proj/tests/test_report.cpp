#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gptlab/ideal.hpp"
#include "gptlab/io.hpp"
#include "gptlab/report.hpp"

using namespace gptlab;

namespace {

Json small_config() {
  return Json{{"schema", 1},
              {"seed", 5},
              {"polygons", {3, 4, 8}},
              {"classical", {1}},
              {"joints", 3},
              {"epsilons", {0.1, 0.3}},
              {"propc_samples", 2},
              {"propc_epsilons", {0.2, 0.6}}};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Report, SameConfigAndSeedGiveIdenticalBytes) {
  const auto a = run_report(small_config());
  const auto b = run_report(small_config());
  EXPECT_EQ(a.json.dump(), b.json.dump());
  EXPECT_EQ(summary_csv(a), summary_csv(b));
  EXPECT_TRUE(a.all_pass) << a.json.dump(2);
  EXPECT_EQ(a.json.at("schema"), 1);
  EXPECT_EQ(a.json.at("verdict"), "pass");
}

TEST(Report, SeedOverrideChangesBatteryDraws) {
  const auto a = run_report(small_config(), 5);
  const auto b = run_report(small_config());
  EXPECT_EQ(a.json.dump(), b.json.dump());
  const auto c = run_report(small_config(), 6);
  EXPECT_EQ(c.json.at("seed"), 6);
  EXPECT_TRUE(c.all_pass);
}

TEST(Report, EmptyConfigGivesEmptyPassingReport) {
  const auto r = run_report(Json{{"schema", 1}});
  EXPECT_TRUE(r.rows.empty());
  EXPECT_TRUE(r.plot.empty());
  EXPECT_TRUE(r.all_pass);
  EXPECT_EQ(summary_csv(r), "check,theory,n,param,lhs,rhs,verdict\n");
  EXPECT_THROW(run_report(Json{{"schema", 2}}), std::invalid_argument);
}

TEST(Report, RowsCoverRequestedChecks) {
  const auto r = run_report(Json{{"polygons", {8}}, {"checks", {"degree_bound", "min_le_sum"}}});
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].check, "degree_bound");
  EXPECT_EQ(r.rows[1].check, "min_le_sum");
  ASSERT_EQ(r.plot.size(), 1u);
  EXPECT_EQ(r.plot[0][0], 8.0);
  EXPECT_NEAR(r.rows[0].rhs, 1 / std::sqrt(2.0), 1e-12);
}

TEST(Report, WritesThreeFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "gptlab_report_test";
  std::filesystem::remove_all(dir);
  const auto r = run_report(Json{{"polygons", {4, 8}}, {"checks", {"degree_bound", "self_dual"}}});
  write_report(r, dir.string());
  const auto csv = slurp(dir / "summary.csv");
  EXPECT_EQ(csv, summary_csv(r));
  EXPECT_EQ(Json::parse(slurp(dir / "report.json")), r.json);
  const auto plot = slurp(dir / "plot_data.csv");
  EXPECT_EQ(plot.substr(0, plot.find('\n')),
            "n,min_le_sum,degree_bound_rhs,degree_bound_closed_form,max_fuzz_lambda,min_mur_linf");
  EXPECT_EQ(std::count(plot.begin(), plot.end(), '\n'), 3);
  std::filesystem::remove_all(dir);
}

TEST(Io, TheoryRoundTrips) {
  const auto exact = make_classical<Rational>(2);
  const auto back = theory_from_json(theory_to_json(exact));
  ASSERT_TRUE(std::holds_alternative<Theory<Rational>>(back));
  EXPECT_EQ(std::get<Theory<Rational>>(back).vertices, exact.vertices);

  const auto p = make_polygon(5);
  const auto pj = theory_from_json(theory_to_json(p));
  ASSERT_TRUE(std::holds_alternative<Theory<double>>(pj));
  const auto& pb = std::get<Theory<double>>(pj);
  ASSERT_EQ(pb.num_vertices(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_TRUE(approx_eq(pb.vertices[i], p.vertices[i], Tolerance{0}));
}

TEST(Io, RationalStringsAndDimCheck) {
  const Json j = {{"name", "tri"},
                  {"dim", 3},
                  {"vertices", {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}},
                  {"unit_effect", {"1", "1", "1"}}};
  EXPECT_TRUE(std::holds_alternative<Theory<Rational>>(theory_from_json(j)));
  Json bad = j;
  bad["dim"] = 4;
  EXPECT_THROW(theory_from_json(bad), TheoryError);
  Json half = j;
  half["unit_effect"] = {"1/2", "1/2", "1/2"};
  half["vertices"] = {{2, 0, 0}, {0, 2, 0}, {0, 0, 2}};
  const auto t = std::get<Theory<Rational>>(theory_from_json(half));
  EXPECT_EQ(t.unit[0], Rational(1, 2));
}

TEST(Io, MeasurementAndJointRoundTrip) {
  const auto t = make_polygon(7);
  const auto m = enumerate_ideal_measurements(t, 2).front().measurement;
  const auto mb = measurement_from_json<double>(measurement_to_json(m));
  ASSERT_EQ(mb.size(), m.size());
  for (std::size_t a = 0; a < m.size(); ++a) EXPECT_TRUE(approx_eq(mb.effects[a], m.effects[a], Tolerance{0}));

  JointMeasurement<double> j{{{0.25 * t.unit, 0.25 * t.unit}, {0.25 * t.unit, 0.25 * t.unit}}};
  const auto jb = joint_from_json<double>(joint_to_json(j));
  EXPECT_EQ(jb.grid, j.grid);
}

TEST(Io, ResolveTheory) {
  EXPECT_EQ(std::get<Theory<double>>(resolve_theory("polygon:6")).num_vertices(), 6u);
  EXPECT_EQ(std::get<Theory<Rational>>(resolve_theory("classical:3")).dim(), 4u);
  EXPECT_EQ(std::get<Theory<double>>(resolve_theory("psi:8")).num_vertices(), 8u);
  EXPECT_THROW(resolve_theory("torus:3"), std::invalid_argument);
  EXPECT_THROW(resolve_theory("/nonexistent/theory.json"), std::invalid_argument);
}
