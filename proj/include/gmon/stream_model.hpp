#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "gmon/rng.hpp"

namespace gmon {

enum class IcKind { normal, student_t, lognormal };

// In-control distribution of one stream. When `standardized` is set the raw
// draw is shifted and scaled to mean 0 and standard deviation 1.
struct DistributionSpec {
  IcKind kind = IcKind::normal;
  double df = 2.5;        // student_t only, must exceed 2
  double log_mean = 1.0;  // lognormal only
  double log_sd = 0.5;    // lognormal only
  bool standardized = true;

  static DistributionSpec standard_normal() { return {}; }
  static DistributionSpec student(double df) {
    return {IcKind::student_t, df, 1.0, 0.5, true};
  }
  static DistributionSpec lognormal(double log_mean, double log_sd) {
    return {IcKind::lognormal, 2.5, log_mean, log_sd, true};
  }

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

struct Moments {
  double mean;
  double sd;
};

// Analytic mean and sd of the raw (unstandardized) distribution.
// Throws InvalidParameter when the variance does not exist.
Moments standardization_constants(const DistributionSpec& spec);

// One stream: IC draws up to and including `change_point`, then
// scale * Z + shift where Z is an IC draw.
struct StreamSpec {
  DistributionSpec ic;
  double shift = 0.0;
  double scale = 1.0;
  std::int64_t change_point = 0;

  bool modified() const { return shift != 0.0 || scale != 1.0; }
  friend bool operator==(const StreamSpec&, const StreamSpec&) = default;
};

enum class OcKind { mean_shift, random_sign_shift, mixed_location_scale };
enum class IcMixture { all_normal, paper_mixture };

struct ScenarioConfig {
  int m = 100;
  int m1 = 0;
  std::int64_t change_point = 0;
  OcKind oc_kind = OcKind::mean_shift;
  double delta = 0.5;  // additive shift magnitude
  double gamma = 1.5;  // multiplicative scale factor (mixed_location_scale)
  IcMixture ic_mixture = IcMixture::all_normal;
  std::uint64_t seed = 1;
};

// The last m1 streams are out of control, the first m - m1 stay in control.
// IC kinds and shift signs are a deterministic function of config.seed.
std::vector<StreamSpec> build_scenario(const ScenarioConfig& config);

std::string_view to_string(IcKind kind);
std::string_view to_string(OcKind kind);
std::string_view to_string(IcMixture mixture);

// Draws observations for one stream from its own substream. Holds the
// distribution objects so that cached normal variates are not thrown away.
class ObservationSource {
 public:
  ObservationSource(const StreamSpec& spec, Rng rng);

  // Standardized (if requested) in-control draw.
  double ic_draw();

  // Observation at tick t >= 1.
  double sample(std::int64_t t);

  Rng& rng() { return rng_; }
  const StreamSpec& spec() const { return spec_; }

 private:
  StreamSpec spec_;
  Rng rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::student_t_distribution<double> student_;
  std::lognormal_distribution<double> lognormal_;
  double center_ = 0.0;
  double inv_sd_ = 1.0;
};

}  // namespace gmon
