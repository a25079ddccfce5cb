#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmon/execution.hpp"
#include "gmon/global_statistics.hpp"
#include "gmon/steady_state_pool.hpp"
#include "gmon/stream_model.hpp"

namespace gmon {

// A local statistic family (taken from the pool), a global statistic, the
// number of streams and, once calibrated, the control limit h. An alarm is
// raised at the first tick with G_t > h.
struct MonitorScheme {
  std::string id;
  GlobalStatKind global;
  std::shared_ptr<const SteadyStatePool> pool;
  std::shared_ptr<const QuantileTable> table;
  int m = 0;
  std::optional<double> control_limit;
  // Cold start instead of steady-state draws from the pool. Quantile tables
  // and the empirical CDF still come from the pool.
  bool cold_start = false;

  const LocalFamily& family() const { return pool->config.statistic; }
};

MonitorScheme make_scheme(std::string id, GlobalStatKind global,
                          std::shared_ptr<const SteadyStatePool> pool, int m);

// One monitoring run over m streams: per-stream observation sources on
// substreams (seed, replication, i), initial states drawn from the pool, and
// the global statistic evaluated each tick.
class Replication {
 public:
  Replication(const MonitorScheme& scheme, std::span<const StreamSpec> streams,
              std::uint64_t seed, std::uint64_t replication);

  // Advances one tick with simulated observations and returns G_t.
  double step();

  // Advances one tick with externally supplied observations (length m).
  double step_with(std::span<const double> observations);

  // Nonparametric streams only: replaces stream i's reference history,
  // keeping the drawn snapshot. Throws InvalidState for other families.
  void use_reference(std::size_t i, std::span<const double> reference);

  std::int64_t tick() const { return tick_; }
  std::span<const double> local_values() const { return values_; }
  // Observations consumed by the last tick.
  std::span<const double> observations() const { return observed_; }

 private:
  void update(std::size_t i, double x);

  const MonitorScheme* scheme_;
  std::vector<ObservationSource> sources_;
  std::vector<LocalState> states_;
  std::vector<double> values_;
  std::vector<double> observed_;
  GlobalEvaluator evaluate_;
  std::int64_t tick_ = 0;
};

struct Breakpoint {
  std::int64_t t;
  double value;

  friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

// Ticks at which the running maximum of G_t strictly increased. The first
// passage above any h is the first breakpoint with value > h, so a single
// trace answers run-length queries for every threshold.
struct RecordMaxTrace {
  std::uint64_t replication = 0;
  std::vector<Breakpoint> breakpoints;
  std::int64_t horizon = 0;
  // True if the trace observed every tick up to the horizon.
  bool complete = true;

  // First tick with G_t > h, or nullopt if censored at the horizon.
  std::optional<std::int64_t> first_passage(double h) const;
  friend bool operator==(const RecordMaxTrace&, const RecordMaxTrace&) = default;
};

RecordMaxTrace simulate_ic_trace(const MonitorScheme& scheme, std::span<const StreamSpec> ic_streams,
                                 std::int64_t t_max, std::uint64_t seed,
                                 std::uint64_t replication);

std::vector<RecordMaxTrace> simulate_ic_traces(const MonitorScheme& scheme,
                                               std::span<const StreamSpec> ic_streams,
                                               std::size_t count, std::int64_t t_max,
                                               std::uint64_t seed, Execution exec);

struct ArlEstimate {
  double arl = 0.0;
  double censored_fraction = 0.0;
};

// Mean first-passage time; censored traces count as their horizon.
ArlEstimate arl_at(double h, std::span<const RecordMaxTrace> traces);

struct CalibrationOptions {
  double target_arl0 = 200.0;
  std::size_t num_traces = 1000;
  std::int64_t t_max = 0;  // 0 selects 20 * target_arl0
  double rel_tol = 0.02;
  std::uint64_t seed = 1;
  Execution exec = Execution::parallel;

  std::int64_t horizon() const;
};

struct CalibrationResult {
  double h = 0.0;
  ArlEstimate at_h;
  std::size_t traces = 0;
  std::int64_t t_max = 0;
};

// Bisection on h over a fixed trace set for the crossing point
// inf{h : ARL(h) >= target}. Throws CalibrationInfeasible when the ARL there
// misses the target by more than rel_tol or more than 20% of traces are
// censored.
CalibrationResult calibrate_from_traces(std::span<const RecordMaxTrace> traces, double target_arl0,
                                        double rel_tol);

// Simulates traces and calibrates. Requires t_max >= 10 * target and at
// least 100 traces.
CalibrationResult calibrate(const MonitorScheme& scheme, std::span<const StreamSpec> ic_streams,
                            const CalibrationOptions& options);

struct RunRecord {
  std::uint64_t replication = 0;
  std::int64_t run_length = 0;
  bool censored = false;
  std::uint64_t discarded = 0;  // attempts thrown away for alarming at or before tau

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// Runs until G_t > h or t_max ticks after the change point. With a change
// point tau > 0, attempts that alarm at or before tau are discarded and
// redrawn on fresh substreams; run_length counts ticks after tau.
RunRecord simulate_oc_run(const MonitorScheme& scheme, std::span<const StreamSpec> streams,
                          double h, std::int64_t t_max, std::uint64_t seed,
                          std::uint64_t replication);

std::vector<RunRecord> simulate_runs(const MonitorScheme& scheme,
                                     std::span<const StreamSpec> streams, double h,
                                     std::int64_t t_max, std::uint64_t seed, std::size_t count,
                                     Execution exec);

struct RunSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // denominator count - 1
  double censored_fraction = 0.0;
  double discard_rate = 0.0;  // discarded attempts / all attempts

  double standard_error() const;
};

// Reduces in replication order so the result does not depend on scheduling.
RunSummary summarize(std::span<const RunRecord> runs);

struct Scenario {
  std::string id;
  ScenarioConfig config;
};

struct Arl1Options {
  std::size_t replications = 500;
  std::int64_t t_max = 4000;
  std::uint64_t seed = 1;
  double target_arl0 = 200.0;
  Execution exec = Execution::parallel;
};

struct Arl1Row {
  std::string scheme_id;
  std::string global_kind;
  int m = 0;
  int m1 = 0;
  std::string scenario_id;
  double target_arl0 = 0.0;
  double h = 0.0;
  std::size_t replications = 0;
  RunSummary summary;
  std::optional<double> wall_seconds;
  std::string error;  // non-empty if this cell failed
};

// One row per (scheme, scenario). Every scheme must carry a control limit.
// A failing cell records its error and the remaining cells still run.
std::vector<Arl1Row> arl1_table(std::span<const MonitorScheme> schemes,
                                std::span<const Scenario> scenarios, const Arl1Options& options);

}  // namespace gmon
