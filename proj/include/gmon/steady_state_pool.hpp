#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gmon/execution.hpp"
#include "gmon/local_statistics.hpp"
#include "gmon/nonparametric_cusum.hpp"
#include "gmon/rng.hpp"
#include "gmon/stream_model.hpp"

namespace gmon {

// Local statistic family together with its parameters.
using LocalFamily = std::variant<CusumParams, AdaptiveParams, NpParams>;

// Tags are part of the pool file format; do not renumber.
enum class StatisticKind : std::uint32_t { cusum = 1, adaptive = 2, nonparametric = 3 };

StatisticKind kind_of(const LocalFamily& family);
std::string_view to_string(StatisticKind kind);
void validate(const LocalFamily& family);

// "cusum(0.5)", "adaptive(0.25,1,4)" or "np(20,40)".
std::string label(const LocalFamily& family);

// Live per-stream state for any family.
using LocalState = std::variant<CusumState, AdaptiveCusumState, NpState>;

double local_stat(const LocalState& state);

struct PoolConfig {
  LocalFamily statistic = CusumParams{};
  std::size_t pool_size = 20000;
  std::size_t burn_in = 2000;
  std::uint64_t seed = 20170101;

  void validate() const;
  friend bool operator==(const PoolConfig&, const PoolConfig&) = default;
};

using SnapshotSet =
    std::variant<std::vector<CusumState>, std::vector<AdaptiveCusumState>, std::vector<NpSnapshot>>;

// K snapshots of a local statistic after burn-in from cold start, plus the
// ascending statistic values. Immutable once built; safe to share across
// threads.
struct SteadyStatePool {
  PoolConfig config;
  SnapshotSet snapshots;
  std::vector<double> sorted_values;

  std::size_t size() const { return sorted_values.size(); }
  StatisticKind kind() const { return kind_of(config.statistic); }
  friend bool operator==(const SteadyStatePool&, const SteadyStatePool&) = default;
};

// Each snapshot k runs burn_in IC N(0,1) steps on substream (seed, k) from
// cold start. The nonparametric family first draws its n-point reference
// sample from the same substream.
SteadyStatePool generate_pool(const PoolConfig& config, Execution exec = Execution::parallel);

// Builds a pool from explicit snapshots (sorting the statistic values).
SteadyStatePool make_pool(const PoolConfig& config, SnapshotSet snapshots);

// Uniform with-replacement index into the pool.
std::size_t draw_snapshot_index(const SteadyStatePool& pool, Rng& rng);

// Draws a snapshot and turns it into a live state. Nonparametric snapshots
// get a fresh n-point IC reference history from `source`.
LocalState draw_initial_state(const SteadyStatePool& pool, ObservationSource& source);

// Cold-start state (all zeros). Nonparametric draws its reference from
// `source`.
LocalState cold_start_state(const LocalFamily& family, ObservationSource& source);

// p_i = (i - 3/4) / (m - 1/2), i = 1..m
std::vector<double> quantile_positions(int m);

struct QuantileTable {
  int m = 0;
  std::vector<double> positions;
  std::vector<double> expected_q;

  friend bool operator==(const QuantileTable&, const QuantileTable&) = default;
};

// Sample quantile of ascending values at level p, interpolating linearly
// between order statistics at 1-based position 1 + p (K - 1).
double interpolated_quantile(std::span<const double> sorted, double p);

QuantileTable expected_quantiles(const SteadyStatePool& pool, int m);

// Mid-rank empirical CDF (L + E/2) / K, clamped to [1/(2K), 1 - 1/(2K)].
double empirical_cdf(const SteadyStatePool& pool, double value);
double empirical_cdf(std::span<const double> sorted, double value);

// Binary, little-endian pool files:
//   "SSPOOL" | u32 version | u32 kind | parameter block | u64 K | u64 burn_in
//   | u64 seed | snapshot records | K f64 sorted values | u64 checksum
// The checksum is FNV-1a 64 over the snapshot records and sorted values.
inline constexpr std::uint32_t kPoolFormatVersion = 1;

void save_pool(const SteadyStatePool& pool, std::ostream& out);
void save_pool(const SteadyStatePool& pool, const std::filesystem::path& path);

// Errors: PoolFormatError (bad magic or malformed), PoolVersionMismatch,
// PoolTruncated, PoolChecksumMismatch, PoolKindMismatch (when `expected`
// is given and differs).
SteadyStatePool load_pool(std::istream& in, const StatisticKind* expected = nullptr);
SteadyStatePool load_pool(const std::filesystem::path& path,
                          const StatisticKind* expected = nullptr);

}  // namespace gmon
