#include <doctest.h>

#include <sstream>

#include "gmon/report.hpp"

using namespace gmon;

namespace {

Arl1Row sample_row() {
  Arl1Row r;
  r.scheme_id = "cusum(0.5)";
  r.global_kind = "gt";
  r.m = 100;
  r.m1 = 1;
  r.scenario_id = "mean_shift";
  r.target_arl0 = 1000;
  r.h = 20.674;
  r.replications = 2500;
  r.summary.count = 2500;
  r.summary.mean = 63.67;
  r.summary.sd = 31.97;
  r.wall_seconds = 1.5;
  return r;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("empty table is just the header") {
  const auto csv = emit_report({}, ReportFormat::csv);
  CHECK(csv ==
        "scheme_id,global_kind,m,m1,scenario_id,target_arl0,h,replications,mean_rl,sd_rl,"
        "censored_fraction,discard_rate,wall_seconds\n");
  const auto md = emit_report({}, ReportFormat::markdown);
  CHECK(std::count(md.begin(), md.end(), '\n') == 2);
}

TEST_CASE("markdown cell style") {
  const std::vector<Arl1Row> rows{sample_row()};
  const auto md = emit_report(rows, ReportFormat::markdown);
  CHECK(md.find("| 63.67 (31.97) |") != std::string::npos);
}

TEST_CASE("csv and markdown carry the same numbers") {
  const std::vector<Arl1Row> rows{sample_row()};
  const auto csv = emit_report(rows, ReportFormat::csv);
  const auto line = csv.substr(csv.find('\n') + 1);
  const auto f = fields(line.substr(0, line.size() - 1));
  REQUIRE(f.size() == 13);
  CHECK(std::stod(f[8]) == 63.67);
  CHECK(std::stod(f[9]) == 31.97);
  CHECK(f[12] == "NA");
  const auto md = emit_report(rows, ReportFormat::markdown);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f (%.2f)", std::stod(f[8]), std::stod(f[9]));
  CHECK(md.find(buf) != std::string::npos);
}

TEST_CASE("timing and failures") {
  auto row = sample_row();
  std::vector<Arl1Row> rows{row};
  CHECK(emit_report(rows, ReportFormat::csv, {true}).find(",1.500\n") != std::string::npos);
  rows[0].error = "boom";
  const auto csv = emit_report(rows, ReportFormat::csv, {true});
  CHECK(csv.find(",NA,NA,NA,NA,NA\n") != std::string::npos);
  CHECK(emit_report(rows, ReportFormat::markdown).find("error: boom") != std::string::npos);
}
