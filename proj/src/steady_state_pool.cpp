#include "gmon/steady_state_pool.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gmon/error.hpp"
#include "gmon/global_statistics.hpp"
#include "parallel.hpp"

namespace gmon {

StatisticKind kind_of(const LocalFamily& family) {
  switch (family.index()) {
    case 0: return StatisticKind::cusum;
    case 1: return StatisticKind::adaptive;
    default: return StatisticKind::nonparametric;
  }
}

std::string_view to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::cusum: return "cusum";
    case StatisticKind::adaptive: return "adaptive";
    case StatisticKind::nonparametric: return "nonparametric";
  }
  return "?";
}

void validate(const LocalFamily& family) {
  std::visit([](const auto& p) { p.validate(); }, family);
}

double local_stat(const LocalState& state) {
  struct {
    double operator()(const CusumState& s) const { return cusum_stat(s); }
    double operator()(const AdaptiveCusumState& s) const { return adaptive_stat(s); }
    double operator()(const NpState& s) const { return np_stat(s); }
  } stat;
  return std::visit(stat, state);
}

std::string label(const LocalFamily& family) {
  switch (family.index()) {
    case 0: return "cusum(" + format_number(std::get<CusumParams>(family).mu) + ")";
    case 1: {
      const auto& p = std::get<AdaptiveParams>(family);
      return "adaptive(" + format_number(p.rho) + "," + format_number(p.s0) + "," +
             format_number(p.t0) + ")";
    }
    default: {
      const auto& p = std::get<NpParams>(family);
      return "np(" + std::to_string(p.d) + "," + std::to_string(p.n) + ")";
    }
  }
}

void PoolConfig::validate() const {
  gmon::validate(statistic);
  if (pool_size < 2) throw InvalidParameter("pool size K must be >= 2");
  if (burn_in < 1) throw InvalidParameter("pool burn-in must be >= 1");
}

namespace {

std::vector<double> reference_sample(ObservationSource& source, int n) {
  std::vector<double> ref(static_cast<std::size_t>(n));
  for (auto& v : ref) v = source.ic_draw();
  return ref;
}

double snapshot_stat(const CusumState& s) { return cusum_stat(s); }
double snapshot_stat(const AdaptiveCusumState& s) { return adaptive_stat(s); }
double snapshot_stat(const NpSnapshot& s) { return np_stat(s); }

CusumState burn(const CusumParams& p, ObservationSource& src, std::size_t steps) {
  CusumState s;
  for (std::size_t t = 0; t < steps; ++t) s = cusum_step(s, src.ic_draw(), p);
  return s;
}

AdaptiveCusumState burn(const AdaptiveParams& p, ObservationSource& src, std::size_t steps) {
  AdaptiveCusumState s;
  for (std::size_t t = 0; t < steps; ++t) s = adaptive_cusum_step(s, src.ic_draw(), p);
  return s;
}

NpSnapshot burn(const NpParams& p, ObservationSource& src, std::size_t steps) {
  const auto ref = reference_sample(src, p.n);
  NpState s = np_init(ref, p);
  for (std::size_t t = 0; t < steps; ++t) np_step(s, src.ic_draw(), p);
  return std::move(s.core);
}

template <class Params>
auto build_snapshots(const Params& params, const PoolConfig& config, Execution exec) {
  using Snapshot = decltype(burn(params, std::declval<ObservationSource&>(), 0));
  std::vector<Snapshot> out(config.pool_size);
  detail::for_each_index(static_cast<std::int64_t>(config.pool_size), exec, [&](std::int64_t k) {
    const auto kk = static_cast<std::uint64_t>(k);
    ObservationSource src(StreamSpec{}, substream(config.seed, kk, kPoolStream));
    out[kk] = burn(params, src, config.burn_in);
  });
  return out;
}

}  // namespace

SteadyStatePool make_pool(const PoolConfig& config, SnapshotSet snapshots) {
  SteadyStatePool pool{config, std::move(snapshots), {}};
  std::visit(
      [&](const auto& snaps) {
        pool.sorted_values.reserve(snaps.size());
        for (const auto& s : snaps) pool.sorted_values.push_back(snapshot_stat(s));
      },
      pool.snapshots);
  std::sort(pool.sorted_values.begin(), pool.sorted_values.end());
  pool.config.pool_size = pool.sorted_values.size();
  return pool;
}

SteadyStatePool generate_pool(const PoolConfig& config, Execution exec) {
  config.validate();
  SnapshotSet snaps = std::visit(
      [&](const auto& params) -> SnapshotSet { return build_snapshots(params, config, exec); },
      config.statistic);
  return make_pool(config, std::move(snaps));
}

std::size_t draw_snapshot_index(const SteadyStatePool& pool, Rng& rng) {
  if (pool.size() == 0) throw InvalidState("cannot draw from an empty pool");
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return pick(rng);
}

LocalState draw_initial_state(const SteadyStatePool& pool, ObservationSource& source) {
  const std::size_t k = draw_snapshot_index(pool, source.rng());
  switch (pool.snapshots.index()) {
    case 0: return std::get<0>(pool.snapshots)[k];
    case 1: return std::get<1>(pool.snapshots)[k];
    default: {
      const auto& params = std::get<NpParams>(pool.config.statistic);
      const auto ref = reference_sample(source, params.n);
      return np_resume(std::get<2>(pool.snapshots)[k], ref, params);
    }
  }
}

LocalState cold_start_state(const LocalFamily& family, ObservationSource& source) {
  switch (family.index()) {
    case 0: return CusumState{};
    case 1: return AdaptiveCusumState{};
    default: {
      const auto& params = std::get<NpParams>(family);
      const auto ref = reference_sample(source, params.n);
      return np_init(ref, params);
    }
  }
}

std::vector<double> quantile_positions(int m) {
  if (m < 1) throw InvalidParameter("quantile positions need m >= 1");
  std::vector<double> p(static_cast<std::size_t>(m));
  const double den = m - 0.5;
  for (int i = 1; i <= m; ++i) p[i - 1] = (i - 0.75) / den;
  return p;
}

double interpolated_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidParameter("quantile of an empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);  // 0-based
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

QuantileTable expected_quantiles(const SteadyStatePool& pool, int m) {
  if (pool.size() < 2) throw InvalidParameter("expected quantiles need a pool of size >= 2");
  QuantileTable table;
  table.m = m;
  table.positions = quantile_positions(m);
  table.expected_q.reserve(table.positions.size());
  for (double p : table.positions) {
    table.expected_q.push_back(interpolated_quantile(pool.sorted_values, p));
  }
  return table;
}

double empirical_cdf(std::span<const double> sorted, double value) {
  const auto k = static_cast<double>(sorted.size());
  const auto lower = std::lower_bound(sorted.begin(), sorted.end(), value);
  const auto upper = std::upper_bound(lower, sorted.end(), value);
  const auto below = static_cast<double>(lower - sorted.begin());
  const auto equal = static_cast<double>(upper - lower);
  const double floor = 0.5 / k;
  return std::clamp((below + 0.5 * equal) / k, floor, 1.0 - floor);
}

double empirical_cdf(const SteadyStatePool& pool, double value) {
  if (pool.size() < 2) throw InvalidParameter("empirical CDF needs a pool of size >= 2");
  return empirical_cdf(pool.sorted_values, value);
}

}  // namespace gmon
