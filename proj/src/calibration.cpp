#include "gmon/calibration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "gmon/error.hpp"
#include "parallel.hpp"

namespace gmon {

MonitorScheme make_scheme(std::string id, GlobalStatKind global,
                          std::shared_ptr<const SteadyStatePool> pool, int m) {
  if (!pool) throw InvalidParameter("scheme needs a steady-state pool");
  if (m < 1) throw InvalidParameter("scheme needs m >= 1");
  MonitorScheme scheme;
  scheme.id = std::move(id);
  scheme.global = global;
  scheme.table = std::make_shared<const QuantileTable>(expected_quantiles(*pool, m));
  scheme.pool = std::move(pool);
  scheme.m = m;
  return scheme;
}

Replication::Replication(const MonitorScheme& scheme, std::span<const StreamSpec> streams,
                         std::uint64_t seed, std::uint64_t replication)
    : scheme_(&scheme),
      values_(static_cast<std::size_t>(scheme.m)),
      observed_(static_cast<std::size_t>(scheme.m)),
      evaluate_(scheme.global, scheme.pool, scheme.table, scheme.m) {
  if (streams.size() != static_cast<std::size_t>(scheme.m)) {
    throw InvalidParameter("scheme " + scheme.id + " expects m=" + std::to_string(scheme.m) +
                           " streams, got " + std::to_string(streams.size()));
  }
  sources_.reserve(streams.size());
  states_.reserve(streams.size());
  for (std::size_t i = 0; i < streams.size(); ++i) {
    auto& src = sources_.emplace_back(streams[i], substream(seed, replication, i));
    states_.push_back(scheme.cold_start ? cold_start_state(scheme.family(), src)
                                        : draw_initial_state(*scheme.pool, src));
    values_[i] = local_stat(states_.back());
  }
}

void Replication::use_reference(std::size_t i, std::span<const double> reference) {
  auto* state = std::get_if<NpState>(&states_.at(i));
  if (!state) throw InvalidState("only nonparametric streams take a reference sample");
  const auto& params = std::get<NpParams>(scheme_->family());
  *state = np_resume(state->core, reference, params);
  values_[i] = np_stat(*state);
}

void Replication::update(std::size_t i, double x) {
  observed_[i] = x;
  auto& state = states_[i];
  const auto& family = scheme_->family();
  switch (state.index()) {
    case 0: {
      auto& s = std::get<CusumState>(state);
      s = cusum_step(s, x, std::get<CusumParams>(family));
      values_[i] = s.s_plus;
      break;
    }
    case 1: {
      auto& s = std::get<AdaptiveCusumState>(state);
      s = adaptive_cusum_step(s, x, std::get<AdaptiveParams>(family));
      values_[i] = adaptive_stat(s);
      break;
    }
    default: {
      auto& s = std::get<NpState>(state);
      np_step(s, x, std::get<NpParams>(family));
      values_[i] = np_stat(s);
    }
  }
}

double Replication::step() {
  ++tick_;
  for (std::size_t i = 0; i < sources_.size(); ++i) update(i, sources_[i].sample(tick_));
  return evaluate_(values_);
}

double Replication::step_with(std::span<const double> observations) {
  if (observations.size() != values_.size()) {
    throw InvalidParameter("expected " + std::to_string(values_.size()) + " observations, got " +
                           std::to_string(observations.size()));
  }
  ++tick_;
  for (std::size_t i = 0; i < observations.size(); ++i) update(i, observations[i]);
  return evaluate_(values_);
}

std::optional<std::int64_t> RecordMaxTrace::first_passage(double h) const {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), h,
                                   [](double v, const Breakpoint& b) { return v < b.value; });
  if (it == breakpoints.end()) return std::nullopt;
  return it->t;
}

RecordMaxTrace simulate_ic_trace(const MonitorScheme& scheme, std::span<const StreamSpec> ic_streams,
                                 std::int64_t t_max, std::uint64_t seed,
                                 std::uint64_t replication) {
  if (t_max < 1) throw InvalidParameter("trace horizon must be >= 1");
  RecordMaxTrace trace;
  trace.replication = replication;
  trace.horizon = t_max;
  Replication run(scheme, ic_streams, seed, replication);
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t t = 1; t <= t_max; ++t) {
    const double g = run.step();
    if (g > best) {
      best = g;
      trace.breakpoints.push_back({t, g});
    }
  }
  return trace;
}

std::vector<RecordMaxTrace> simulate_ic_traces(const MonitorScheme& scheme,
                                               std::span<const StreamSpec> ic_streams,
                                               std::size_t count, std::int64_t t_max,
                                               std::uint64_t seed, Execution exec) {
  std::vector<RecordMaxTrace> traces(count);
  detail::for_each_index(static_cast<std::int64_t>(count), exec, [&](std::int64_t r) {
    const auto rep = static_cast<std::uint64_t>(r);
    traces[rep] = simulate_ic_trace(scheme, ic_streams, t_max, seed, rep);
  });
  return traces;
}

ArlEstimate arl_at(double h, std::span<const RecordMaxTrace> traces) {
  if (traces.empty()) throw InvalidParameter("arl_at needs at least one trace");
  double total = 0.0;
  std::size_t censored = 0;
  for (const auto& trace : traces) {
    if (const auto t = trace.first_passage(h)) {
      total += static_cast<double>(*t);
    } else {
      total += static_cast<double>(trace.horizon);
      ++censored;
    }
  }
  const auto n = static_cast<double>(traces.size());
  return {total / n, static_cast<double>(censored) / n};
}

std::int64_t CalibrationOptions::horizon() const {
  return t_max > 0 ? t_max : static_cast<std::int64_t>(std::ceil(20.0 * target_arl0));
}

CalibrationResult calibrate_from_traces(std::span<const RecordMaxTrace> traces, double target_arl0,
                                        double rel_tol) {
  if (traces.empty()) throw InvalidParameter("calibration needs traces");
  if (!(target_arl0 >= 1.0)) throw InvalidParameter("target ARL0 must be >= 1");

  // ARL(h) is a right-continuous step function that only jumps at breakpoint
  // values, so the crossing point is one of them.
  std::vector<double> candidates;
  for (const auto& trace : traces) {
    for (const auto& b : trace.breakpoints) candidates.push_back(b.value);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  CalibrationResult result;
  result.traces = traces.size();
  result.t_max = traces.front().horizon;
  if (candidates.empty()) throw CalibrationInfeasible("traces hold no breakpoints");

  const ArlEstimate top = arl_at(candidates.back(), traces);
  if (top.arl < target_arl0) {
    throw CalibrationInfeasible("target ARL0 " + std::to_string(target_arl0) +
                                " unreachable within the horizon (max ARL " +
                                std::to_string(top.arl) + ")");
  }
  const auto crossing = std::partition_point(
      candidates.begin(), candidates.end(),
      [&](double h) { return arl_at(h, traces).arl < target_arl0; });
  result.h = crossing == candidates.begin() ? candidates.front() - 1.0 : *crossing;
  if (crossing == candidates.begin() && arl_at(result.h, traces).arl < target_arl0) {
    result.h = *crossing;
  }
  result.at_h = arl_at(result.h, traces);

  if (result.at_h.censored_fraction > 0.2) {
    throw CalibrationInfeasible("more than 20% of traces censored at the calibrated limit (" +
                                std::to_string(result.at_h.censored_fraction) +
                                "); raise the horizon");
  }
  if (std::abs(result.at_h.arl - target_arl0) > rel_tol * target_arl0) {
    throw CalibrationInfeasible("ARL jumps past the target tolerance at h=" +
                                std::to_string(result.h) + " (ARL " +
                                std::to_string(result.at_h.arl) + "); use more traces");
  }
  return result;
}

CalibrationResult calibrate(const MonitorScheme& scheme, std::span<const StreamSpec> ic_streams,
                            const CalibrationOptions& options) {
  const std::int64_t horizon = options.horizon();
  if (static_cast<double>(horizon) < 10.0 * options.target_arl0) {
    throw InvalidParameter("calibration horizon must be at least 10 * target ARL0");
  }
  if (options.num_traces < 100) throw InvalidParameter("calibration needs at least 100 traces");
  if (!(options.rel_tol > 0.0)) throw InvalidParameter("rel_tol must be > 0");
  const auto traces =
      simulate_ic_traces(scheme, ic_streams, options.num_traces, horizon, options.seed, options.exec);
  return calibrate_from_traces(traces, options.target_arl0, options.rel_tol);
}

RunRecord simulate_oc_run(const MonitorScheme& scheme, std::span<const StreamSpec> streams,
                          double h, std::int64_t t_max, std::uint64_t seed,
                          std::uint64_t replication) {
  if (t_max < 1) throw InvalidParameter("run horizon must be >= 1");
  std::int64_t tau = 0;
  for (const auto& s : streams) tau = std::max(tau, s.change_point);

  constexpr std::uint64_t kMaxAttempts = 100000;
  for (std::uint64_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const std::uint64_t attempt_seed = attempt == 0 ? seed : mix_seed(seed, attempt);
    Replication run(scheme, streams, attempt_seed, replication);
    bool early_alarm = false;
    for (std::int64_t t = 1; t <= tau + t_max; ++t) {
      if (run.step() > h) {
        if (t <= tau) {
          early_alarm = true;
          break;
        }
        return {replication, t - tau, false, attempt};
      }
    }
    if (!early_alarm) return {replication, t_max, true, attempt};
  }
  throw Error("every attempt alarmed before the change point (h=" + std::to_string(h) + ")");
}

std::vector<RunRecord> simulate_runs(const MonitorScheme& scheme,
                                     std::span<const StreamSpec> streams, double h,
                                     std::int64_t t_max, std::uint64_t seed, std::size_t count,
                                     Execution exec) {
  std::vector<RunRecord> runs(count);
  detail::for_each_index(static_cast<std::int64_t>(count), exec, [&](std::int64_t r) {
    const auto rep = static_cast<std::uint64_t>(r);
    runs[rep] = simulate_oc_run(scheme, streams, h, t_max, seed, rep);
  });
  return runs;
}

double RunSummary::standard_error() const {
  return count > 0 ? sd / std::sqrt(static_cast<double>(count)) : 0.0;
}

RunSummary summarize(std::span<const RunRecord> runs) {
  RunSummary s;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t censored = 0;
  double discarded = 0.0;
  for (const auto& r : runs) {
    ++s.count;
    const double x = static_cast<double>(r.run_length);
    const double delta = x - mean;
    mean += delta / static_cast<double>(s.count);
    m2 += delta * (x - mean);
    if (r.censored) ++censored;
    discarded += static_cast<double>(r.discarded);
  }
  if (s.count == 0) return s;
  const auto n = static_cast<double>(s.count);
  s.mean = mean;
  s.sd = s.count > 1 ? std::sqrt(m2 / (n - 1.0)) : 0.0;
  s.censored_fraction = static_cast<double>(censored) / n;
  s.discard_rate = discarded / (discarded + n);
  return s;
}

std::vector<Arl1Row> arl1_table(std::span<const MonitorScheme> schemes,
                                std::span<const Scenario> scenarios, const Arl1Options& options) {
  std::vector<Arl1Row> rows;
  for (const auto& scheme : schemes) {
    for (const auto& scenario : scenarios) {
      Arl1Row row;
      row.scheme_id = scheme.id;
      row.global_kind = describe(scheme.global);
      row.m = scenario.config.m;
      row.m1 = scenario.config.m1;
      row.scenario_id = scenario.id;
      row.target_arl0 = options.target_arl0;
      row.h = scheme.control_limit.value_or(std::numeric_limits<double>::quiet_NaN());
      row.replications = options.replications;
      try {
        if (!scheme.control_limit) {
          throw InvalidParameter("scheme " + scheme.id + " has no control limit");
        }
        const auto start = std::chrono::steady_clock::now();
        const auto specs = build_scenario(scenario.config);
        const auto runs = simulate_runs(scheme, specs, *scheme.control_limit, options.t_max,
                                        options.seed, options.replications, options.exec);
        row.summary = summarize(runs);
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace gmon
