#include "gmon/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gmon {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"statistic", {"family", "mu", "rho", "s0", "t0", "d", "n", "alpha1", "alpha2", "start"}},
      {"global", {"kinds", "h"}},
      {"pool", {"path", "size", "burn_in", "seed"}},
      {"experiment",
       {"m", "m1", "scenario", "delta", "gamma", "change_point", "ic", "target_arl0",
        "replications", "traces", "t_max", "rel_tol", "seed"}},
      {"io", {"output", "format"}},
  };
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')' && depth > 0) --depth;
    if (c == ',' && depth == 0) {
      out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.emplace_back(trim(cur));
  return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  T v{};
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) return std::nullopt;
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) return std::nullopt;
  }
  return v;
}

// Typed access to parsed sections that records issues instead of throwing.
class Reader {
 public:
  Reader(std::map<std::string, Section>& sections, std::vector<ConfigIssue>& issues)
      : sections_(sections), issues_(issues) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
  }

  void issue(const std::string& section, const std::string& key, std::string message) {
    const Entry* e = find(section, key);
    issues_.push_back({section, key, e ? e->line : 0, std::move(message)});
  }

  template <class T>
  void number(const std::string& section, const std::string& key, T& target) {
    const Entry* e = find(section, key);
    if (!e) return;
    if (auto v = parse_number<T>(e->value)) {
      target = *v;
    } else {
      issue(section, key, "expected " + std::string(type_name<T>()) + ", got '" + e->value + "'");
    }
  }

  template <class T>
  void number_list(const std::string& section, const std::string& key, std::vector<T>& target) {
    const Entry* e = find(section, key);
    if (!e) return;
    std::vector<T> values;
    for (const auto& item : split_list(e->value)) {
      if (auto v = parse_number<T>(item)) {
        values.push_back(*v);
      } else {
        issue(section, key,
              "expected a list of " + std::string(type_name<T>()) + ", bad item '" + item + "'");
        return;
      }
    }
    target = std::move(values);
  }

  void text(const std::string& section, const std::string& key, std::string& target) {
    if (const Entry* e = find(section, key)) target = e->value;
  }

  template <class E>
  void choice(const std::string& section, const std::string& key,
              const std::map<std::string, E>& options, E& target) {
    const Entry* e = find(section, key);
    if (!e) return;
    const auto it = options.find(e->value);
    if (it != options.end()) {
      target = it->second;
      return;
    }
    std::string allowed;
    for (const auto& [name, _] : options) allowed += (allowed.empty() ? "" : ", ") + name;
    issue(section, key, "unknown value '" + e->value + "' (expected one of: " + allowed + ")");
  }

 private:
  template <class T>
  static constexpr std::string_view type_name() {
    if constexpr (std::is_floating_point_v<T>) return "a number";
    else if constexpr (std::is_signed_v<T>) return "an integer";
    else return "a nonnegative integer";
  }

  std::map<std::string, Section>& sections_;
  std::vector<ConfigIssue>& issues_;
};

std::map<std::string, Section> tokenize(std::string_view text, std::vector<ConfigIssue>& issues) {
  std::map<std::string, Section> sections;
  std::string current;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({"", "", line_no, "malformed section header"});
        continue;
      }
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().contains(current)) {
        issues.push_back({current, "", line_no, "unknown section [" + current + "]"});
      }
      sections[current];
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({current, "", line_no, "expected 'key = value'"});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (current.empty()) {
      issues.push_back({"", key, line_no, "key outside of any section"});
      continue;
    }
    const auto known = known_keys().find(current);
    if (known != known_keys().end() && !known->second.contains(key)) {
      issues.push_back({current, key, line_no, "unknown key"});
      continue;
    }
    auto& section = sections[current];
    if (const auto prev = section.find(key); prev != section.end()) {
      issues.push_back({current, key, line_no,
                        "duplicate key (first set on line " + std::to_string(prev->second.line) +
                            ")"});
      continue;
    }
    section.emplace(key, Entry{value, line_no});
  }
  return sections;
}

const std::map<std::string, OcKind>& scenario_names() {
  static const std::map<std::string, OcKind> names = {
      {"mean_shift", OcKind::mean_shift},
      {"random_sign_shift", OcKind::random_sign_shift},
      {"mixed_location_scale", OcKind::mixed_location_scale}};
  return names;
}

}  // namespace

std::int64_t ExperimentBlock::horizon() const {
  return t_max > 0 ? t_max : static_cast<std::int64_t>(std::ceil(20.0 * target_arl0));
}

std::string ConfigIssue::to_string() const {
  std::string where = section.empty() ? "config" : section;
  if (!key.empty()) where += "." + key;
  if (line > 0) where += " (line " + std::to_string(line) + ")";
  return where + ": " + message;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : InvalidConfig([&] {
        std::string msg = std::to_string(issues.size()) + " configuration error(s)";
        for (const auto& i : issues) msg += "\n  " + i.to_string();
        return msg;
      }()),
      issues_(std::move(issues)) {}

GlobalStatKind parse_global_kind(std::string_view text) {
  text = trim(text);
  if (text == "gt") return QuantileGt{};
  if (text == "gz") return ZouGz{};
  if (text == "max") return MaxStat{};
  if (text == "sum") return SumStat{};
  if (text.starts_with("soft(") && text.ends_with(")")) {
    if (auto b = parse_number<double>(text.substr(5, text.size() - 6))) return SoftThreshold{*b};
  }
  throw InvalidParameter("unknown global statistic '" + std::string(text) +
                         "' (expected gt, gz, soft(b), max or sum)");
}

MonitorConfig parse_config(std::string_view text) {
  std::vector<ConfigIssue> issues;
  auto sections = tokenize(text, issues);
  Reader r(sections, issues);
  MonitorConfig c;

  // statistic
  std::string family = "cusum";
  r.text("statistic", "family", family);
  std::string start = "steady";
  r.text("statistic", "start", start);
  if (start == "cold") {
    c.statistic.cold_start = true;
  } else if (start != "steady") {
    r.issue("statistic", "start", "expected 'steady' or 'cold', got '" + start + "'");
  }
  if (family == "cusum") {
    CusumParams p;
    r.number("statistic", "mu", p.mu);
    c.statistic.family = p;
  } else if (family == "adaptive") {
    AdaptiveParams p;
    r.number("statistic", "rho", p.rho);
    r.number("statistic", "s0", p.s0);
    r.number("statistic", "t0", p.t0);
    c.statistic.family = p;
  } else if (family == "nonparametric") {
    int d = 20;
    int n = 40;
    r.number("statistic", "d", d);
    r.number("statistic", "n", n);
    NpParams p = NpParams::with_default_priors(std::max(d, 1), n);
    p.d = d;
    r.number_list("statistic", "alpha1", p.alpha1);
    r.number_list("statistic", "alpha2", p.alpha2);
    c.statistic.family = p;
  } else {
    r.issue("statistic", "family",
            "unknown family '" + family + "' (expected cusum, adaptive or nonparametric)");
  }
  try {
    validate(c.statistic.family);
  } catch (const InvalidParameter& e) {
    r.issue("statistic", "", e.what());
  }

  // global
  if (const Entry* e = r.find("global", "kinds")) {
    c.global.kinds.clear();
    for (const auto& item : split_list(e->value)) {
      try {
        c.global.kinds.push_back(parse_global_kind(item));
      } catch (const InvalidParameter& ex) {
        r.issue("global", "kinds", ex.what());
      }
    }
    if (c.global.kinds.empty()) r.issue("global", "kinds", "at least one global statistic needed");
  }
  r.number_list("global", "h", c.global.h);
  if (!c.global.h.empty() && c.global.h.size() != c.global.kinds.size()) {
    r.issue("global", "h",
            "global.h has " + std::to_string(c.global.h.size()) +
                " entries but global.kinds has " + std::to_string(c.global.kinds.size()));
  }

  // pool
  r.text("pool", "path", c.pool.path);
  r.number("pool", "size", c.pool.size);
  r.number("pool", "burn_in", c.pool.burn_in);
  r.number("pool", "seed", c.pool.seed);
  if (c.pool.size < 2) r.issue("pool", "size", "pool size must be >= 2");
  if (c.pool.burn_in < 1) r.issue("pool", "burn_in", "burn-in must be >= 1");

  // experiment
  auto& x = c.experiment;
  r.number("experiment", "m", x.m);
  r.number_list("experiment", "m1", x.m1);
  r.choice("experiment", "scenario", scenario_names(), x.scenario);
  r.number("experiment", "delta", x.delta);
  r.number("experiment", "gamma", x.gamma);
  r.number("experiment", "change_point", x.change_point);
  r.choice("experiment", "ic",
           std::map<std::string, IcMixture>{{"normal", IcMixture::all_normal},
                                            {"mixture", IcMixture::paper_mixture}},
           x.ic);
  r.number("experiment", "target_arl0", x.target_arl0);
  r.number("experiment", "replications", x.replications);
  r.number("experiment", "traces", x.traces);
  r.number("experiment", "t_max", x.t_max);
  r.number("experiment", "rel_tol", x.rel_tol);
  r.number("experiment", "seed", x.seed);
  if (x.m < 1) r.issue("experiment", "m", "m must be >= 1");
  if (x.m1.empty()) r.issue("experiment", "m1", "at least one m1 value needed");
  for (int m1 : x.m1) {
    if (m1 < 0 || m1 > x.m) {
      r.issue("experiment", "m1",
              "experiment.m1 = " + std::to_string(m1) + " must lie in [0, experiment.m = " +
                  std::to_string(x.m) + "]");
    }
  }
  if (!(x.gamma > 0.0)) r.issue("experiment", "gamma", "scale factor must be > 0");
  if (x.change_point < 0) r.issue("experiment", "change_point", "change point must be >= 0");
  if (!(x.target_arl0 >= 1.0)) r.issue("experiment", "target_arl0", "target ARL0 must be >= 1");
  if (x.replications < 1) r.issue("experiment", "replications", "need at least one replication");
  if (x.traces < 1) r.issue("experiment", "traces", "need at least one trace");
  if (x.t_max < 0) r.issue("experiment", "t_max", "t_max must be >= 0 (0 selects 20 * ARL0)");
  if (!(x.rel_tol > 0.0)) r.issue("experiment", "rel_tol", "rel_tol must be > 0");

  // io
  r.text("io", "output", c.io.output);
  r.choice("io", "format",
           std::map<std::string, ReportFormat>{{"csv", ReportFormat::csv},
                                               {"markdown", ReportFormat::markdown}},
           c.io.format);

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

MonitorConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({{"", "", 0, "cannot read config file '" + path + "'"}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const MonitorConfig& c) {
  std::ostringstream os;
  auto num = [](double v) { return format_number(v); };
  auto join = [](const auto& values, auto&& fmt) {
    std::string out;
    for (const auto& v : values) out += (out.empty() ? "" : ", ") + fmt(v);
    return out;
  };

  os << "[statistic]\n";
  switch (c.statistic.family.index()) {
    case 0:
      os << "family = cusum\nmu = " << num(std::get<CusumParams>(c.statistic.family).mu) << "\n";
      break;
    case 1: {
      const auto& p = std::get<AdaptiveParams>(c.statistic.family);
      os << "family = adaptive\nrho = " << num(p.rho) << "\ns0 = " << num(p.s0)
         << "\nt0 = " << num(p.t0) << "\n";
      break;
    }
    default: {
      const auto& p = std::get<NpParams>(c.statistic.family);
      os << "family = nonparametric\nd = " << p.d << "\nn = " << p.n
         << "\nalpha1 = " << join(p.alpha1, num) << "\nalpha2 = " << join(p.alpha2, num) << "\n";
    }
  }
  os << "start = " << (c.statistic.cold_start ? "cold" : "steady") << "\n\n";

  os << "[global]\nkinds = " << join(c.global.kinds, [](const auto& k) { return describe(k); })
     << "\n";
  if (!c.global.h.empty()) os << "h = " << join(c.global.h, num) << "\n";
  os << "\n";

  os << "[pool]\n";
  if (!c.pool.path.empty()) os << "path = " << c.pool.path << "\n";
  os << "size = " << c.pool.size << "\nburn_in = " << c.pool.burn_in << "\nseed = " << c.pool.seed
     << "\n\n";

  const auto& x = c.experiment;
  os << "[experiment]\nm = " << x.m << "\nm1 = "
     << join(x.m1, [](int v) { return std::to_string(v); }) << "\nscenario = "
     << to_string(x.scenario) << "\ndelta = " << num(x.delta) << "\ngamma = " << num(x.gamma)
     << "\nchange_point = " << x.change_point
     << "\nic = " << (x.ic == IcMixture::paper_mixture ? "mixture" : "normal")
     << "\ntarget_arl0 = " << num(x.target_arl0) << "\nreplications = " << x.replications
     << "\ntraces = " << x.traces << "\nt_max = " << x.t_max << "\nrel_tol = " << num(x.rel_tol)
     << "\nseed = " << x.seed << "\n\n";

  os << "[io]\n";
  if (!c.io.output.empty()) os << "output = " << c.io.output << "\n";
  os << "format = " << (c.io.format == ReportFormat::markdown ? "markdown" : "csv") << "\n";
  return os.str();
}

void apply_full_scale(MonitorConfig& config) {
  config.pool.size = 100000;
  config.pool.burn_in = 2000;
  config.experiment.target_arl0 = 1000.0;
  config.experiment.replications = 2500;
  config.experiment.t_max = 0;
}

PoolConfig pool_config(const MonitorConfig& config) {
  PoolConfig p;
  p.statistic = config.statistic.family;
  p.pool_size = config.pool.size;
  p.burn_in = config.pool.burn_in;
  p.seed = config.pool.seed;
  return p;
}

ScenarioConfig scenario_config(const MonitorConfig& config, int m1) {
  ScenarioConfig s;
  s.m = config.experiment.m;
  s.m1 = m1;
  s.change_point = config.experiment.change_point;
  s.oc_kind = config.experiment.scenario;
  s.delta = config.experiment.delta;
  s.gamma = config.experiment.gamma;
  s.ic_mixture = config.experiment.ic;
  s.seed = config.experiment.seed;
  return s;
}

}  // namespace gmon
