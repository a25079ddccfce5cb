// Serial reference vs OpenMP replications on the same workload. Both paths
// must agree exactly; the timings show the parallel speedup.

#include <chrono>
#include <cstdio>
#include <memory>

#include <CLI11.hpp>

#include "gmon/calibration.hpp"
#include "gmon/execution.hpp"

using namespace gmon;

namespace {

template <class Fn>
double seconds(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel benchmark"};
  int m = 100;
  std::size_t pool_size = 20000;
  std::size_t traces = 200;
  std::int64_t horizon = 2000;
  int threads = 0;
  app.add_option("--m", m, "Streams");
  app.add_option("--pool", pool_size, "Pool size");
  app.add_option("--traces", traces, "IC traces");
  app.add_option("--horizon", horizon, "Ticks per trace");
  app.add_option("--threads", threads, "Worker threads (0: default)");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) set_worker_count(threads);

  PoolConfig cfg;
  cfg.pool_size = pool_size;
  std::shared_ptr<const SteadyStatePool> pool;
  SteadyStatePool serial_pool, parallel_pool;
  const double pool_serial = seconds([&] { serial_pool = generate_pool(cfg, Execution::serial); });
  const double pool_parallel =
      seconds([&] { parallel_pool = generate_pool(cfg, Execution::parallel); });
  pool = std::make_shared<const SteadyStatePool>(serial_pool);

  const auto scheme = make_scheme("cusum", QuantileGt{}, pool, m);
  const std::vector<StreamSpec> ic(static_cast<std::size_t>(m));
  std::vector<RecordMaxTrace> a, b;
  const double trace_serial =
      seconds([&] { a = simulate_ic_traces(scheme, ic, traces, horizon, 1, Execution::serial); });
  const double trace_parallel =
      seconds([&] { b = simulate_ic_traces(scheme, ic, traces, horizon, 1, Execution::parallel); });

  std::printf("workers            %d\n", worker_count());
  std::printf("%-18s %10s %10s %8s %s\n", "kernel", "serial_s", "parallel_s", "speedup", "match");
  std::printf("%-18s %10.3f %10.3f %8.2f %s\n", "generate_pool", pool_serial, pool_parallel,
              pool_serial / pool_parallel, serial_pool == parallel_pool ? "yes" : "NO");
  std::printf("%-18s %10.3f %10.3f %8.2f %s\n", "simulate_ic_traces", trace_serial, trace_parallel,
              trace_serial / trace_parallel, a == b ? "yes" : "NO");
  return serial_pool == parallel_pool && a == b ? 0 : 1;
}
