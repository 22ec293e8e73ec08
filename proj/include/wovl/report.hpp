#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wovl/simulation.hpp"

namespace wovl {

// Fixed six-decimal rendering with '.' as separator regardless of locale.
std::string format_fixed6(double v);

// Scenario batch config. Either a JSON array of scenario objects or an object
// {"scenarios": [...]}. Each scenario has exactly these fields:
//   scale1, shape1, scale2, shape2, seed               (required)
//   n1, n2 (both or neither; neither expands to sizes (10,10), (20,30), (30,30),
//           (50,50), (100,200))
//   replications (default 1000), estimators (default ["parametric_avg","kernel"]),
//   fit_mode (default "unrestricted"), mse_convention (default "about_exact")
// Problems throw ParseError whose message starts with the field path,
// e.g. "scenarios[2].shape1: ...".
std::vector<Scenario> parse_scenario_config(const std::string& json_text);
std::vector<Scenario> read_scenario_config(const std::string& path);

inline constexpr const char* kReportCsvHeader =
    "scenario_id,estimator,delta_exact,mean,rb,rrmse,eff,failures";

struct ReportRow {
  std::string scenario_id;
  std::string estimator;
  double delta_exact = 0.0;
  double mean = 0.0;
  double rb = 0.0;
  double rrmse = 0.0;
  std::optional<double> eff;
  std::size_t failures = 0;
};

std::vector<ReportRow> report_rows(const ScenarioReport& report);

// Header plus one row per scenario x estimator. Missing eff is an empty field.
void write_report_csv(std::ostream& out, std::span<const ScenarioReport> reports);
void write_report_rows(std::ostream& out, std::span<const ReportRow> rows);

// Inverse of write_report_csv. Lines starting with '#' are ignored. A wrong
// header or malformed row throws ParseError naming the line.
std::vector<ReportRow> parse_report_csv(std::istream& in);

// Groups rows by parameter family (equal scales, equal shapes, both differ)
// and renders one Markdown table per family with RB / RRMSE / EFF rows per
// sample size. No rows renders an empty string.
std::string render_markdown(std::span<const ReportRow> rows);

}  // namespace wovl
