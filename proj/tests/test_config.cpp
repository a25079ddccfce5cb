#include <doctest.h>

#include <filesystem>
#include <string>

#include "gmon/config.hpp"

using namespace gmon;

namespace {

std::vector<ConfigIssue> issues_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal config") {
  const auto c = parse_config(R"(
[statistic]
family = cusum
mu = 0.5

[global]
kinds = gt

[experiment]
m = 100
)");
  CHECK(std::get<CusumParams>(c.statistic.family).mu == 0.5);
  CHECK(c.global.kinds == std::vector<GlobalStatKind>{QuantileGt{}});
  CHECK(c.experiment.m == 100);
  CHECK(c == parse_config(""));
}

TEST_CASE("every issue is reported with its location") {
  const auto issues = issues_of(R"(
[experiment]
m = 100
m1 = 1, 200
m = 50
delta = big
colour = blue
[nowhere]
)");
  REQUIRE(issues.size() == 5);
  CHECK(issues[0].key == "m");
  CHECK(issues[0].line == 5);
  CHECK(issues[0].message.find("duplicate") != std::string::npos);
  CHECK(issues[0].message.find("line 3") != std::string::npos);
  CHECK(issues[1].key == "colour");
  CHECK(issues[2].section == "nowhere");
  CHECK(issues[3].key == "delta");
  CHECK(issues[3].line == 6);
  CHECK(issues[4].key == "m1");

  const auto m1 = issues_of("[experiment]\nm = 100\nm1 = 200\n");
  REQUIRE(m1.size() == 1);
  CHECK(m1[0].message.find("experiment.m1 = 200") != std::string::npos);
  CHECK(m1[0].message.find("experiment.m = 100") != std::string::npos);
  CHECK(m1[0].to_string().find("(line 3)") != std::string::npos);
}

TEST_CASE("type and constraint errors") {
  CHECK(issues_of("[statistic]\nfamily = bogus\n").size() == 1);
  CHECK(issues_of("[statistic]\nfamily = nonparametric\nd = 20\nn = 30\n").size() == 1);
  CHECK(issues_of("[global]\nkinds = gt, soft(x)\n").size() == 1);
  CHECK(issues_of("[global]\nkinds = gt, max\nh = 1\n").size() == 1);
  CHECK(issues_of("[experiment]\nreplications = -3\n").size() == 1);
  CHECK(issues_of("[io]\nformat = pdf\n").size() == 1);
  CHECK(issues_of("m = 3\n").size() == 1);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), InvalidConfig);
}

TEST_CASE("emit round-trips") {
  const char* texts[] = {
      "",
      "[statistic]\nfamily = adaptive\nrho = 0.3\nstart = cold\n[global]\nkinds = gz, soft(4.605170185988092), max, sum\nh = 1, 2.5, 3, 4\n",
      "[statistic]\nfamily = nonparametric\nd = 4\nn = 8\n[experiment]\nm1 = 1, 5, 10\nscenario = mixed_location_scale\nic = mixture\nchange_point = 100\nseed = 18446744073709551615\n[pool]\npath = p.bin\n[io]\noutput = out.csv\nformat = markdown\n",
  };
  for (const char* text : texts) {
    const auto c = parse_config(text);
    const auto emitted = emit_config(c);
    const auto again = parse_config(emitted);
    CHECK(again == c);
    CHECK(emit_config(again) == emitted);
  }
}

TEST_CASE("full scale") {
  auto c = parse_config("");
  apply_full_scale(c);
  CHECK(c.pool.size == 100000);
  CHECK(c.experiment.target_arl0 == 1000.0);
  CHECK(c.experiment.replications == 2500);
  CHECK(c.experiment.horizon() == 20000);
}

TEST_CASE("global kinds") {
  CHECK(parse_global_kind("soft(0.5)") == GlobalStatKind{SoftThreshold{0.5}});
  CHECK(parse_global_kind(" max ") == GlobalStatKind{MaxStat{}});
  CHECK_THROWS_AS(parse_global_kind("median"), InvalidParameter);
}

TEST_CASE("shipped configs parse") {
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(GMON_SOURCE_DIR "/configs")) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    const auto c = load_config(entry.path().string());
    CHECK(parse_config(emit_config(c)) == c);
    ++count;
  }
  CHECK(count >= 3);
}
