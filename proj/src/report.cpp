#include "gmon/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace gmon {

namespace {

std::string fixed(double v, int digits) {
  if (!std::isfinite(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string markdown_cell(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string emit_report(std::span<const Arl1Row> rows, ReportFormat format,
                        const ReportOptions& options) {
  std::ostringstream os;
  if (format == ReportFormat::csv) {
    os << "scheme_id,global_kind,m,m1,scenario_id,target_arl0,h,replications,mean_rl,sd_rl,"
          "censored_fraction,discard_rate,wall_seconds\n";
    for (const auto& r : rows) {
      const bool ok = r.error.empty();
      const auto stat = [&](double v, int digits) { return ok ? fixed(v, digits) : "NA"; };
      os << r.scheme_id << ',' << r.global_kind << ',' << r.m << ',' << r.m1 << ','
         << r.scenario_id << ',' << fixed(r.target_arl0, 1) << ',' << fixed(r.h, 6) << ','
         << r.replications << ',' << stat(r.summary.mean, 4) << ',' << stat(r.summary.sd, 4)
         << ',' << stat(r.summary.censored_fraction, 4) << ','
         << stat(r.summary.discard_rate, 4) << ','
         << (options.include_timing && ok && r.wall_seconds ? fixed(*r.wall_seconds, 3) : "NA")
         << '\n';
    }
    return os.str();
  }

  os << "| scheme | global | m | m1 | scenario | ARL0 | h | ARL1 (sd) | censored | discard |";
  if (options.include_timing) os << " seconds |";
  os << "\n|---|---|---|---|---|---|---|---|---|---|";
  if (options.include_timing) os << "---|";
  os << '\n';
  for (const auto& r : rows) {
    const bool ok = r.error.empty();
    os << "| " << markdown_cell(r.scheme_id) << " | " << markdown_cell(r.global_kind) << " | "
       << r.m << " | " << r.m1 << " | " << markdown_cell(r.scenario_id) << " | "
       << fixed(r.target_arl0, 0) << " | " << fixed(r.h, 3) << " | ";
    if (ok) {
      os << fixed(r.summary.mean, 2) << " (" << fixed(r.summary.sd, 2) << ") | "
         << fixed(r.summary.censored_fraction, 4) << " | " << fixed(r.summary.discard_rate, 4)
         << " |";
    } else {
      os << "error: " << markdown_cell(r.error) << " | NA | NA |";
    }
    if (options.include_timing) {
      os << ' ' << (ok && r.wall_seconds ? fixed(*r.wall_seconds, 3) : "NA") << " |";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace gmon
