#include "gmon/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "gmon/calibration.hpp"
#include "gmon/config.hpp"
#include "gmon/execution.hpp"
#include "gmon/report.hpp"

namespace gmon {

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool full_scale = false;
  int threads = 0;
  std::string out_path;
  std::string input_path;
  std::string format;
  bool timing = false;
};

// Config-level problems detected after parsing map to exit code 2.
struct UsageError : InvalidConfig {
  using InvalidConfig::InvalidConfig;
};

std::uint64_t calibration_seed(const MonitorConfig& c) { return mix_seed(c.experiment.seed, 1); }
std::uint64_t run_seed(const MonitorConfig& c) { return mix_seed(c.experiment.seed, 2); }

std::shared_ptr<const SteadyStatePool> obtain_pool(const MonitorConfig& config, std::ostream& err) {
  const PoolConfig wanted = pool_config(config);
  if (!config.pool.path.empty()) {
    if (!std::filesystem::exists(config.pool.path)) {
      throw UsageError("pool.path: file '" + config.pool.path +
                       "' does not exist (run gen-pool first or clear pool.path)");
    }
    const StatisticKind kind = kind_of(wanted.statistic);
    auto pool = std::make_shared<const SteadyStatePool>(load_pool(config.pool.path, &kind));
    if (pool->config.statistic != wanted.statistic) {
      throw UsageError("pool file '" + config.pool.path + "' holds " +
                       label(pool->config.statistic) + " but the config asks for " +
                       label(wanted.statistic));
    }
    return pool;
  }
  err << "generating pool: " << label(wanted.statistic) << " K=" << wanted.pool_size
      << " burn_in=" << wanted.burn_in << "\n";
  return std::make_shared<const SteadyStatePool>(generate_pool(wanted, Execution::parallel));
}

MonitorScheme scheme_for(const MonitorConfig& config, std::shared_ptr<const SteadyStatePool> pool,
                         std::size_t kind_index) {
  const auto& kind = config.global.kinds[kind_index];
  auto scheme = make_scheme(label(config.statistic.family), kind, std::move(pool),
                            config.experiment.m);
  scheme.cold_start = config.statistic.cold_start;
  if (!config.global.h.empty()) scheme.control_limit = config.global.h[kind_index];
  return scheme;
}

CalibrationOptions calibration_options(const MonitorConfig& config) {
  CalibrationOptions o;
  o.target_arl0 = config.experiment.target_arl0;
  o.num_traces = config.experiment.traces;
  o.t_max = config.experiment.horizon();
  o.rel_tol = config.experiment.rel_tol;
  o.seed = calibration_seed(config);
  o.exec = Execution::parallel;
  return o;
}

std::vector<StreamSpec> ic_streams(const MonitorConfig& config) {
  return build_scenario(scenario_config(config, 0));
}

// Fills in missing control limits by calibration.
std::vector<MonitorScheme> calibrated_schemes(const MonitorConfig& config,
                                              const std::shared_ptr<const SteadyStatePool>& pool,
                                              std::ostream& err) {
  std::vector<MonitorScheme> schemes;
  const auto ic = ic_streams(config);
  for (std::size_t k = 0; k < config.global.kinds.size(); ++k) {
    auto scheme = scheme_for(config, pool, k);
    if (!scheme.control_limit) {
      const auto result = calibrate(scheme, ic, calibration_options(config));
      err << "calibrated " << describe(scheme.global) << ": h=" << format_number(result.h)
          << " ARL0=" << result.at_h.arl << "\n";
      scheme.control_limit = result.h;
    }
    schemes.push_back(std::move(scheme));
  }
  return schemes;
}

std::string scenario_label(const ScenarioConfig& s) {
  std::string id(to_string(s.oc_kind));
  if (s.m1 == 0) id = "in_control";
  if (s.change_point > 0) id += "_tau" + std::to_string(s.change_point);
  return id;
}

Arl1Options arl_options(const MonitorConfig& config) {
  Arl1Options o;
  o.replications = config.experiment.replications;
  o.t_max = config.experiment.horizon();
  o.seed = run_seed(config);
  o.target_arl0 = config.experiment.target_arl0;
  o.exec = Execution::parallel;
  return o;
}

void write_output(const std::string& text, const MonitorConfig& config, std::ostream& out) {
  if (config.io.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(config.io.output, std::ios::binary);
  if (!file) throw Error("cannot write '" + config.io.output + "'");
  file << text;
  if (!file) throw Error("failed writing '" + config.io.output + "'");
}

int finish_table(const std::vector<Arl1Row>& rows, const MonitorConfig& config, const Flags& flags,
                 std::ostream& out, std::ostream& err) {
  write_output(emit_report(rows, config.io.format, {flags.timing}), config, out);
  int code = kExitOk;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      err << "cell " << r.global_kind << " m1=" << r.m1 << " failed: " << r.error << "\n";
      code = kExitRuntime;
    }
  }
  return code;
}

int cmd_gen_pool(const MonitorConfig& config, std::ostream& out) {
  if (config.io.output.empty() && config.pool.path.empty()) {
    throw UsageError("gen-pool needs --out or pool.path");
  }
  const std::string path = config.io.output.empty() ? config.pool.path : config.io.output;
  const auto pool = generate_pool(pool_config(config), Execution::parallel);
  save_pool(pool, std::filesystem::path(path));
  out << "wrote " << path << ": " << label(pool.config.statistic) << " K=" << pool.size()
      << " burn_in=" << pool.config.burn_in << " seed=" << pool.config.seed << "\n";
  return kExitOk;
}

int cmd_calibrate(const MonitorConfig& config, std::ostream& out, std::ostream& err) {
  const auto pool = obtain_pool(config, err);
  const auto ic = ic_streams(config);
  std::ostringstream os;
  os << "scheme_id,global_kind,m,target_arl0,h,arl0,censored_fraction,traces,t_max\n";
  int code = kExitOk;
  for (std::size_t k = 0; k < config.global.kinds.size(); ++k) {
    auto scheme = scheme_for(config, pool, k);
    try {
      const auto r = calibrate(scheme, ic, calibration_options(config));
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s,%s,%d,%.1f,%.6f,%.4f,%.4f,%zu,%lld\n", scheme.id.c_str(),
                    describe(scheme.global).c_str(), scheme.m, config.experiment.target_arl0, r.h,
                    r.at_h.arl, r.at_h.censored_fraction, r.traces,
                    static_cast<long long>(r.t_max));
      os << buf;
    } catch (const CalibrationInfeasible& e) {
      err << describe(scheme.global) << ": " << e.what() << "\n";
      code = kExitRuntime;
    }
  }
  write_output(os.str(), config, out);
  return code;
}

std::vector<Scenario> scenarios_for(const MonitorConfig& config) {
  std::vector<Scenario> out;
  for (int m1 : config.experiment.m1) {
    const auto s = scenario_config(config, m1);
    out.push_back({scenario_label(s), s});
  }
  return out;
}

int cmd_arl0(const MonitorConfig& config, const Flags& flags, std::ostream& out,
             std::ostream& err) {
  const auto pool = obtain_pool(config, err);
  const auto schemes = calibrated_schemes(config, pool, err);
  auto s = scenario_config(config, 0);
  s.change_point = 0;
  const std::vector<Scenario> scenarios{{scenario_label(s), s}};
  return finish_table(arl1_table(schemes, scenarios, arl_options(config)), config, flags, out, err);
}

int cmd_arl1(const MonitorConfig& config, const Flags& flags, std::ostream& out,
             std::ostream& err) {
  const auto pool = obtain_pool(config, err);
  const auto schemes = calibrated_schemes(config, pool, err);
  return finish_table(arl1_table(schemes, scenarios_for(config), arl_options(config)), config,
                      flags, out, err);
}

std::vector<double> parse_row(const std::string& line, int m, int line_no) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (true) {
    const auto end = line.find_first_of(",\t", pos);
    std::string_view field(line.data() + pos, (end == std::string::npos ? line.size() : end) - pos);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\r')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\r')) field.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size() ||
        !std::isfinite(v)) {
      throw Error("input line " + std::to_string(line_no) + ": field " +
                  std::to_string(values.size() + 1) + " is not a finite number ('" +
                  std::string(field) + "')");
    }
    values.push_back(v);
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  if (static_cast<int>(values.size()) != m) {
    throw Error("input line " + std::to_string(line_no) + ": expected " + std::to_string(m) +
                " fields, got " + std::to_string(values.size()));
  }
  return values;
}

int cmd_monitor(const MonitorConfig& config, const Flags& flags, std::istream& in,
                std::ostream& out, std::ostream& err) {
  std::ifstream file;
  std::istream* source = &in;
  if (!flags.input_path.empty()) {
    file.open(flags.input_path);
    if (!file) throw Error("cannot read input '" + flags.input_path + "'");
    source = &file;
  }
  const auto pool = obtain_pool(config, err);
  MonitorConfig one = config;
  one.global.kinds.resize(1);
  if (!one.global.h.empty()) one.global.h.resize(1);
  const auto scheme = calibrated_schemes(one, pool, err).front();
  const double h = *scheme.control_limit;
  const int m = config.experiment.m;
  const auto ic = ic_streams(config);
  Replication run(scheme, ic, config.experiment.seed, 0);

  const auto* np = std::get_if<NpParams>(&scheme.family());
  const int reference_rows = np ? np->n : 0;
  std::vector<std::vector<double>> reference(static_cast<std::size_t>(m));

  std::string line;
  int line_no = 0;
  int rows = 0;
  while (std::getline(*source, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
    const auto x = parse_row(line, m, line_no);
    if (rows++ < reference_rows) {
      for (int i = 0; i < m; ++i) reference[i].push_back(x[i]);
      if (rows == reference_rows) {
        for (int i = 0; i < m; ++i) run.use_reference(static_cast<std::size_t>(i), reference[i]);
      }
      continue;
    }
    const double g = run.step_with(x);
    err << "t=" << run.tick() << " G=" << format_number(g) << "\n";
    if (g > h) {
      out << "ALARM t=" << run.tick() << std::endl;
      return kExitOk;
    }
  }
  if (rows < reference_rows) {
    throw Error("input ended after " + std::to_string(rows) + " rows; the nonparametric " +
                "statistic needs " + std::to_string(reference_rows) + " reference rows");
  }
  err << "no alarm after " << run.tick() << " ticks (h=" << format_number(h) << ")\n";
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Multi-stream change detection: pools, calibration, ARL tables, monitoring", "gmon"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Flags flags;
  app.add_option("--config", flags.config_path, "Config file")->check(CLI::ExistingFile);
  app.add_option("--seed", flags.seed, "Override experiment.seed");
  app.add_flag("--full-scale", flags.full_scale, "K=1e5, ARL0=1000, 2500 replications");
  app.add_option("--threads", flags.threads, "Worker threads (0: runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", flags.out_path, "Output file (pool file for gen-pool)");
  app.add_option("--format", flags.format, "Report format")
      ->check(CLI::IsMember({"csv", "markdown"}));
  app.add_flag("--timing", flags.timing, "Fill the wall_seconds column");

  app.add_subcommand("gen-pool", "Generate and save a steady-state pool");
  app.add_subcommand("calibrate", "Calibrate control limits to the target ARL0");
  app.add_subcommand("arl0", "Estimate in-control run lengths at the control limits");
  app.add_subcommand("arl1", "Estimate out-of-control run lengths for every m1");
  app.add_subcommand("monitor", "Monitor delimited rows, one tick per line")
      ->add_option("--input", flags.input_path, "Input file (default: standard input)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    MonitorConfig config = flags.config_path.empty() ? MonitorConfig{} : load_config(flags.config_path);
    if (flags.full_scale) apply_full_scale(config);
    if (flags.seed) config.experiment.seed = *flags.seed;
    if (!flags.out_path.empty()) config.io.output = flags.out_path;
    if (!flags.format.empty()) {
      config.io.format = flags.format == "markdown" ? ReportFormat::markdown : ReportFormat::csv;
    }
    if (flags.threads > 0) set_worker_count(flags.threads);

    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "gen-pool") return cmd_gen_pool(config, out);
    if (name == "calibrate") return cmd_calibrate(config, out, err);
    if (name == "arl0") return cmd_arl0(config, flags, out, err);
    if (name == "arl1") return cmd_arl1(config, flags, out, err);
    return cmd_monitor(config, flags, in, out, err);
  } catch (const InvalidConfig& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace gmon
