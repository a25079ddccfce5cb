// Acceptance suite. Prints one [PASS]/[FAIL]/[SKIP] line per criterion and
// exits nonzero if any gated criterion fails. Criterion 7 runs only with
// --extended.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmon/calibration.hpp"
#include "gmon/execution.hpp"
#include "gmon/global_statistics.hpp"
#include "gmon/nonparametric_cusum.hpp"
#include "gmon/report.hpp"
#include "gmon/rng.hpp"
#include "support/oracles.hpp"

using namespace gmon;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::string csv;  // deterministic output used by the determinism gate
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::shared_ptr<const SteadyStatePool> cusum_pool(std::size_t k, std::uint64_t seed) {
  PoolConfig cfg;
  cfg.statistic = CusumParams{0.5};
  cfg.pool_size = k;
  cfg.burn_in = 2000;
  cfg.seed = seed;
  return std::make_shared<const SteadyStatePool>(generate_pool(cfg));
}

Arl1Row row_of(const MonitorScheme& s, int m1, const std::string& scenario, double target,
               const std::vector<RunRecord>& runs) {
  Arl1Row r;
  r.scheme_id = label(s.family());
  r.global_kind = describe(s.global);
  r.m = s.m;
  r.m1 = m1;
  r.scenario_id = scenario;
  r.target_arl0 = target;
  r.h = *s.control_limit;
  r.replications = runs.size();
  r.summary = summarize(runs);
  return r;
}

Outcome criterion1() {
  Rng rng(mix_seed(1, 1));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int m : {1, 2, 10, 100, 1000}) {
    QuantileTable table;
    table.m = m;
    table.positions = quantile_positions(m);
    for (double p : table.positions) table.expected_q.push_back(logistic_quantile_transform(p));
    std::vector<double> us(static_cast<std::size_t>(m)), w(us.size());
    for (int trial = 0; trial < 10000; ++trial) {
      for (std::size_t i = 0; i < us.size(); ++i) {
        do us[i] = u(rng); while (us[i] == 0.0);
        w[i] = logistic_quantile_transform(us[i]);
      }
      worst = std::max(worst, std::abs(gtz(us) - gt(w, table)));
    }
  }
  return {worst <= 1e-10, fmt("max |gtz - gt| = %.3g over 5 x 10^4 vectors (tol 1e-10)", worst)};
}

Outcome criterion2() {
  Rng rng(mix_seed(1, 2));
  std::uniform_int_distribution<int> len(0, 50);
  std::normal_distribution<double> z;
  const double mus[] = {-0.5, -0.25, 0.25, 0.5, 1.0};
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double mu = mus[trial % 5];
    std::vector<double> xs(static_cast<std::size_t>(len(rng)));
    for (auto& x : xs) x = z(rng) + (trial % 2 ? mu : 0.0);
    CusumState s;
    for (double x : xs) s = cusum_step(s, x, {mu});
    worst = std::max(worst, std::abs(s.s_plus - oracle::cusum(xs, mu)));
  }
  return {worst <= 1e-12, fmt("max |fold - oracle| = %.3g over 10^4 sequences (tol 1e-12)", worst)};
}

Outcome criterion3() {
  Rng rng(mix_seed(1, 3));
  std::normal_distribution<double> z;
  const auto params = NpParams::with_default_priors(4, 8);
  auto f = [](double x) { return x * x * x + x; };
  double worst_oracle = 0.0, worst_rank = 0.0;
  for (int run = 0; run < 100; ++run) {
    std::vector<double> ref(8), xs(30);
    for (auto& x : ref) x = z(rng);
    for (auto& x : xs) x = z(rng) + (run % 4 == 0 ? 0.75 : 0.0);
    const auto expected = oracle::np_trajectory(ref, xs, params);
    auto a = np_init(ref, params);
    std::vector<double> ref_t;
    for (double x : ref) ref_t.push_back(f(x));
    auto b = np_init(ref_t, params);
    for (std::size_t t = 0; t < xs.size(); ++t) {
      np_step(a, xs[t], params);
      np_step(b, f(xs[t]), params);
      for (int c = 0; c < 4; ++c) {
        worst_oracle = std::max(worst_oracle, std::abs(a.core.shat[c] - expected[t][c]));
        worst_rank = std::max(worst_rank, std::abs(a.core.shat[c] - b.core.shat[c]));
      }
    }
  }
  return {worst_oracle <= 1e-10 && worst_rank <= 1e-12,
          fmt("max oracle gap %.3g (tol 1e-10), max rank-transform gap %.3g (tol 1e-12)",
              worst_oracle, worst_rank)};
}

Outcome criterion4(std::uint64_t seed) {
  const int m = 50;
  const double target = 200.0;
  auto scheme = make_scheme("cusum", QuantileGt{}, cusum_pool(20000, mix_seed(seed, 40)), m);
  const std::vector<StreamSpec> ic(m);
  CalibrationOptions o;
  o.target_arl0 = target;
  o.num_traces = 1000;
  o.seed = mix_seed(seed, 41);
  const auto cal = calibrate(scheme, ic, o);
  scheme.control_limit = cal.h;
  const auto runs = simulate_runs(scheme, ic, cal.h, o.horizon(), mix_seed(seed, 42), 1000,
                                  Execution::parallel);
  const std::vector<Arl1Row> rows{row_of(scheme, 0, "in_control", target, runs)};
  const double mean = rows[0].summary.mean;
  const double rel = std::abs(mean - target) / target;
  return {rel < 0.07,
          fmt("h = %.4f, re-simulated ARL0 = %.2f (%.1f%% from 200, tol 7%%)", cal.h, mean,
              100.0 * rel),
          emit_report(rows, ReportFormat::csv)};
}

Outcome criterion5(std::uint64_t seed) {
  const int m = 100;
  const double target = 200.0;
  const auto pool = cusum_pool(20000, mix_seed(seed, 50));
  const std::vector<StreamSpec> ic(m);
  CalibrationOptions o;
  o.target_arl0 = target;
  o.num_traces = 1000;
  o.seed = mix_seed(seed, 51);

  const GlobalStatKind kinds[] = {QuantileGt{}, SoftThreshold{0.5}, SoftThreshold{std::log(100.0)}};
  std::vector<MonitorScheme> schemes;
  for (const auto& k : kinds) {
    auto s = make_scheme("cusum", k, pool, m);
    s.control_limit = calibrate(s, ic, o).h;
    schemes.push_back(std::move(s));
  }
  std::vector<Scenario> scenarios;
  for (int m1 : {1, 100}) {
    ScenarioConfig sc;
    sc.m = m;
    sc.m1 = m1;
    sc.delta = 0.5;
    sc.seed = seed;
    scenarios.push_back({"mean_shift", sc});
  }
  Arl1Options a;
  a.replications = 500;
  a.t_max = o.horizon();
  a.seed = mix_seed(seed, 52);
  a.target_arl0 = target;
  const auto rows = arl1_table(schemes, scenarios, a);
  for (const auto& r : rows) {
    if (!r.error.empty()) return {false, "cell failed: " + r.error, emit_report(rows, ReportFormat::csv)};
  }
  // rows: scheme-major, scenarios m1 = 1, 100
  auto cell = [&](int scheme, int scenario) { return rows[2 * scheme + scenario].summary; };
  auto margin = [](const RunSummary& lo, const RunSummary& hi) {
    const double se = std::hypot(lo.standard_error(), hi.standard_error());
    return (hi.mean - lo.mean) / se;
  };
  const double z1 = margin(cell(0, 0), cell(1, 0));
  const double z2 = margin(cell(1, 1), cell(2, 1));
  std::ostringstream detail;
  detail << fmt("m1=1: G_t %.2f < soft(1/2) %.2f (%.1f SE); ", cell(0, 0).mean, cell(1, 0).mean, z1)
         << fmt("m1=100: soft(1/2) %.2f < soft(log 100) %.2f (%.1f SE); need 2 SE", cell(1, 1).mean,
                cell(2, 1).mean, z2);
  return {z1 > 2.0 && z2 > 2.0, detail.str(), emit_report(rows, ReportFormat::csv)};
}

Outcome criterion6(std::uint64_t seed) {
  PoolConfig cfg;
  cfg.statistic = NpParams::with_default_priors(20, 40);
  cfg.pool_size = 2000;
  cfg.burn_in = 500;
  cfg.seed = mix_seed(seed, 60);
  auto pool = std::make_shared<const SteadyStatePool>(generate_pool(cfg));
  auto scheme = make_scheme("np", MaxStat{}, pool, 1);

  // Threshold fixed from normal data with an independent seed.
  const std::vector<StreamSpec> normal(1);
  CalibrationOptions o;
  o.target_arl0 = 100.0;
  o.num_traces = 400;
  o.rel_tol = 0.1;
  o.seed = mix_seed(seed, 61);
  const double h = calibrate(scheme, normal, o).h;
  scheme.control_limit = h;

  std::vector<StreamSpec> lognormal(1);
  lognormal[0].ic = DistributionSpec::lognormal(1.0, 0.5);
  const auto a = simulate_runs(scheme, normal, h, o.horizon(), mix_seed(seed, 62), 2000,
                               Execution::parallel);
  const auto b = simulate_runs(scheme, lognormal, h, o.horizon(), mix_seed(seed, 63), 2000,
                               Execution::parallel);
  const std::vector<Arl1Row> rows{row_of(scheme, 0, "ic_normal", 100.0, a),
                                  row_of(scheme, 0, "ic_lognormal", 100.0, b)};
  const auto& sa = rows[0].summary;
  const auto& sb = rows[1].summary;
  const double z = std::abs(sa.mean - sb.mean) / std::hypot(sa.standard_error(), sb.standard_error());
  return {z < 3.0,
          fmt("h = %.4f, IC ARL normal %.2f vs lognormal %.2f (%.2f combined SE, tol 3)", h, sa.mean,
              sb.mean, z),
          emit_report(rows, ReportFormat::csv)};
}

Outcome criterion7(std::uint64_t seed) {
  const int m = 100;
  auto scheme = make_scheme("cusum", QuantileGt{}, cusum_pool(100000, mix_seed(seed, 70)), m);
  const std::vector<StreamSpec> ic(m);
  CalibrationOptions o;
  o.target_arl0 = 1000.0;
  o.num_traces = 2500;
  o.seed = mix_seed(seed, 71);
  const double h = calibrate(scheme, ic, o).h;
  const double rel = std::abs(h - 20.674) / 20.674;
  return {rel <= 0.02, fmt("h = %.4f vs 20.674 (%.2f%%, tol 2%%)", h, 100.0 * rel)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-8"};
  bool extended = false;
  std::vector<int> only;
  std::uint64_t seed = 20240601;
  int threads_a = 0;
  int threads_b = 0;
  app.add_flag("--extended", extended, "Also run criterion 7 (full scale, hours)");
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--threads", threads_a, "Worker count of the first pass (0: default)");
  app.add_option("--rerun-threads", threads_b, "Worker count of the determinism rerun (0: differs from the first pass)");
  CLI11_PARSE(app, argc, argv);

  const std::set<int> selected(only.begin(), only.end());
  auto wanted = [&](int k) { return selected.empty() || selected.contains(k); };
  bool all_pass = true;
  auto report = [&](int k, const Outcome& o, double seconds) {
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << k << ": " << o.detail
              << fmt(" (%.1fs)", seconds) << std::endl;
    if (!o.pass && k != 7) all_pass = false;
  };
  auto timed = [&](int k, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what(), ""};
    }
    report(k, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    return o;
  };

  if (threads_a > 0) set_worker_count(threads_a);
  const int first_workers = worker_count();

  if (wanted(1)) timed(1, criterion1);
  if (wanted(2)) timed(2, criterion2);
  if (wanted(3)) timed(3, criterion3);
  std::vector<std::pair<int, std::function<Outcome()>>> simulated{
      {4, [&] { return criterion4(seed); }},
      {5, [&] { return criterion5(seed); }},
      {6, [&] { return criterion6(seed); }}};
  std::vector<std::pair<int, std::string>> first_csv;
  for (auto& [k, fn] : simulated) {
    if (wanted(k)) first_csv.emplace_back(k, timed(k, fn).csv);
  }

  if (!wanted(7)) {
  } else if (extended) {
    timed(7, [&] { return criterion7(seed); });
  } else {
    std::cout << "[SKIP] criterion 7: full-scale control limit (hours of compute); "
                 "not part of the gate, run with --extended" << std::endl;
  }

  if (wanted(8)) {
    const auto start = std::chrono::steady_clock::now();
    set_worker_count(threads_b > 0 ? threads_b : (first_workers == 1 ? 3 : 1));
    Outcome o{true, "", ""};
    std::ostringstream detail;
    if (first_csv.empty()) {
      o = {false, "nothing to compare (criteria 4-6 not selected)", ""};
    }
    for (auto& [k, csv] : first_csv) {
      std::string again;
      try {
        for (auto& [j, fn] : simulated) {
          if (j == k) again = fn().csv;
        }
      } catch (const std::exception& e) {
        again = std::string("error: ") + e.what();
      }
      const bool same = !csv.empty() && csv == again;
      o.pass = o.pass && same;
      detail << "criterion " << k << (same ? " identical" : " DIFFERS") << "; ";
    }
    if (!first_csv.empty()) {
      o.detail = detail.str() + "workers " + std::to_string(first_workers) + " vs " +
                 std::to_string(worker_count());
    }
    report(8, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return all_pass ? 0 : 1;
}
