#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gptlab/io.hpp"

namespace gptlab {

/// One line of the summary table.
struct ReportRow {
  std::string check;
  std::string theory;
  int n = 0;
  double param = 0;
  double lhs = 0;
  double rhs = 0;
  bool pass = false;
};

struct Report {
  Json json;                      // "schema": 1, config echo, rows, failing reports
  std::vector<ReportRow> rows;
  std::vector<std::vector<double>> plot;  // n, min_le_sum, degree_bound_rhs, closed_form, max_lambda, min_mur
  bool all_pass = true;
};

/// Runs the configured battery. `seed` overrides the config seed when set. Output depends only
/// on the config and seed.
Report run_report(const Json& config, std::optional<std::uint64_t> seed = std::nullopt);

/// Writes report.json, summary.csv and plot_data.csv into `dir` (created when missing).
void write_report(const Report& r, const std::string& dir);

std::string summary_csv(const Report& r);

}  // namespace gptlab
