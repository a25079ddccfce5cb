#pragma once

#include <span>
#include <string>

#include "gmon/calibration.hpp"
#include "gmon/config.hpp"

namespace gmon {

struct ReportOptions {
  // Without timing the wall_seconds column is "NA", so reruns are
  // byte-identical.
  bool include_timing = false;
};

// CSV columns: scheme_id, global_kind, m, m1, scenario_id, target_arl0, h,
// replications, mean_rl, sd_rl, censored_fraction, discard_rate,
// wall_seconds. Markdown renders one row per cell with "mean (sd)".
// Failed cells print NA for every simulated quantity.
std::string emit_report(std::span<const Arl1Row> rows, ReportFormat format,
                        const ReportOptions& options = {});

}  // namespace gmon
