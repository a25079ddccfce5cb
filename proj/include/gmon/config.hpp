#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmon/error.hpp"
#include "gmon/global_statistics.hpp"
#include "gmon/steady_state_pool.hpp"
#include "gmon/stream_model.hpp"

namespace gmon {

enum class ReportFormat { csv, markdown };

struct StatisticBlock {
  LocalFamily family = CusumParams{};
  bool cold_start = false;

  friend bool operator==(const StatisticBlock&, const StatisticBlock&) = default;
};

struct GlobalBlock {
  std::vector<GlobalStatKind> kinds{QuantileGt{}};
  std::vector<double> h;  // empty, or one control limit per kind

  friend bool operator==(const GlobalBlock&, const GlobalBlock&) = default;
};

struct PoolBlock {
  std::string path;  // empty: generate in memory
  std::size_t size = 20000;
  std::size_t burn_in = 2000;
  std::uint64_t seed = 20170101;

  friend bool operator==(const PoolBlock&, const PoolBlock&) = default;
};

struct ExperimentBlock {
  int m = 100;
  std::vector<int> m1{1};
  OcKind scenario = OcKind::mean_shift;
  double delta = 0.5;
  double gamma = 1.5;
  std::int64_t change_point = 0;
  IcMixture ic = IcMixture::all_normal;
  double target_arl0 = 200.0;
  std::size_t replications = 500;
  std::size_t traces = 1000;
  std::int64_t t_max = 0;  // 0: 20 * target_arl0
  double rel_tol = 0.02;
  std::uint64_t seed = 1;

  std::int64_t horizon() const;
  friend bool operator==(const ExperimentBlock&, const ExperimentBlock&) = default;
};

struct IoBlock {
  std::string output;  // empty: standard output
  ReportFormat format = ReportFormat::csv;

  friend bool operator==(const IoBlock&, const IoBlock&) = default;
};

// Flat sections of `key = value` lines:
//
//   [statistic]  family, mu | rho, s0, t0 | d, n, alpha1, alpha2; start
//   [global]     kinds (gt, gz, soft(b), max, sum), h
//   [pool]       path, size, burn_in, seed
//   [experiment] m, m1, scenario, delta, gamma, change_point, ic,
//                target_arl0, replications, traces, t_max, rel_tol, seed
//   [io]         output, format
//
// Lists are comma separated; `#` and `;` start comments.
struct MonitorConfig {
  StatisticBlock statistic;
  GlobalBlock global;
  PoolBlock pool;
  ExperimentBlock experiment;
  IoBlock io;

  friend bool operator==(const MonitorConfig&, const MonitorConfig&) = default;
};

struct ConfigIssue {
  std::string section;
  std::string key;
  int line = 0;  // 0 when the issue is not tied to one line
  std::string message;

  std::string to_string() const;
};

class ConfigError : public InvalidConfig {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

// Parses and validates, collecting every issue before throwing ConfigError.
MonitorConfig parse_config(std::string_view text);
MonitorConfig load_config(const std::string& path);

// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const MonitorConfig& config);

// Full-scale settings: K = 10^5, ARL0 = 1000, 2500 replications.
void apply_full_scale(MonitorConfig& config);

PoolConfig pool_config(const MonitorConfig& config);
ScenarioConfig scenario_config(const MonitorConfig& config, int m1);

// "gt", "gz", "soft(0.5)", "max" or "sum".
GlobalStatKind parse_global_kind(std::string_view text);

}  // namespace gmon
