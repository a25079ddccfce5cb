#include "gmon/stream_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gmon/error.hpp"

namespace gmon {

Moments standardization_constants(const DistributionSpec& spec) {
  switch (spec.kind) {
    case IcKind::normal:
      return {0.0, 1.0};
    case IcKind::student_t:
      if (!(spec.df > 2.0)) {
        throw InvalidParameter("student_t requires df > 2 for a finite variance, got " +
                               std::to_string(spec.df));
      }
      return {0.0, std::sqrt(spec.df / (spec.df - 2.0))};
    case IcKind::lognormal: {
      if (!(spec.log_sd > 0.0)) {
        throw InvalidParameter("lognormal requires log_sd > 0");
      }
      const double s2 = spec.log_sd * spec.log_sd;
      const double mean = std::exp(spec.log_mean + 0.5 * s2);
      return {mean, std::sqrt(std::expm1(s2)) * mean};
    }
  }
  throw InvalidParameter("unknown distribution kind");
}

std::vector<StreamSpec> build_scenario(const ScenarioConfig& config) {
  if (config.m < 1) throw InvalidParameter("scenario needs m >= 1");
  if (config.m1 < 0 || config.m1 > config.m) {
    throw InvalidParameter("scenario needs 0 <= m1 <= m, got m1=" + std::to_string(config.m1) +
                           " m=" + std::to_string(config.m));
  }
  if (config.change_point < 0) throw InvalidParameter("change_point must be >= 0");
  if (!(config.gamma > 0.0)) throw InvalidParameter("scale factor gamma must be > 0");

  const auto m = static_cast<std::size_t>(config.m);
  std::vector<StreamSpec> specs(m);
  for (auto& s : specs) s.change_point = config.change_point;

  if (config.ic_mixture == IcMixture::paper_mixture) {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng perm_rng(mix_seed(config.seed, kScenarioStream));
    std::shuffle(order.begin(), order.end(), perm_rng);
    const std::size_t n_normal = m / 2;
    const std::size_t n_student = m / 5;
    for (std::size_t k = 0; k < m; ++k) {
      DistributionSpec ic;
      if (k < n_normal) {
        ic = DistributionSpec::standard_normal();
      } else if (k < n_normal + n_student) {
        ic = DistributionSpec::student(2.5);
      } else {
        ic = DistributionSpec::lognormal(1.0, 0.5);
      }
      specs[order[k]].ic = ic;
    }
  }

  const auto m1 = static_cast<std::size_t>(config.m1);
  const std::size_t first_oc = m - m1;
  switch (config.oc_kind) {
    case OcKind::mean_shift:
      for (std::size_t i = first_oc; i < m; ++i) specs[i].shift = config.delta;
      break;
    case OcKind::random_sign_shift: {
      Rng sign_rng(mix_seed(config.seed, kScenarioStream + 1));
      std::bernoulli_distribution coin(0.5);
      for (std::size_t i = first_oc; i < m; ++i) {
        specs[i].shift = coin(sign_rng) ? config.delta : -config.delta;
      }
      break;
    }
    case OcKind::mixed_location_scale: {
      const std::size_t n_shift = (m1 + 1) / 2;
      for (std::size_t k = 0; k < m1; ++k) {
        if (k < n_shift) {
          specs[first_oc + k].shift = config.delta;
        } else {
          specs[first_oc + k].scale = config.gamma;
        }
      }
      break;
    }
  }
  return specs;
}

std::string_view to_string(IcKind kind) {
  switch (kind) {
    case IcKind::normal: return "normal";
    case IcKind::student_t: return "student_t";
    case IcKind::lognormal: return "lognormal";
  }
  return "?";
}

std::string_view to_string(OcKind kind) {
  switch (kind) {
    case OcKind::mean_shift: return "mean_shift";
    case OcKind::random_sign_shift: return "random_sign_shift";
    case OcKind::mixed_location_scale: return "mixed_location_scale";
  }
  return "?";
}

std::string_view to_string(IcMixture mixture) {
  switch (mixture) {
    case IcMixture::all_normal: return "all_normal";
    case IcMixture::paper_mixture: return "mixture";
  }
  return "?";
}

ObservationSource::ObservationSource(const StreamSpec& spec, Rng rng)
    : spec_(spec),
      rng_(rng),
      student_(spec.ic.kind == IcKind::student_t ? spec.ic.df : 3.0),
      lognormal_(spec.ic.log_mean, spec.ic.kind == IcKind::lognormal ? spec.ic.log_sd : 1.0) {
  if (!(spec.scale > 0.0)) throw InvalidParameter("stream scale must be > 0");
  if (spec.ic.standardized) {
    const Moments mom = standardization_constants(spec.ic);
    center_ = mom.mean;
    inv_sd_ = 1.0 / mom.sd;
  } else if (spec.ic.kind == IcKind::student_t) {
    standardization_constants(spec.ic);  // still reject df <= 2
  }
}

double ObservationSource::ic_draw() {
  double raw = 0.0;
  switch (spec_.ic.kind) {
    case IcKind::normal: return normal_(rng_);
    case IcKind::student_t: raw = student_(rng_); break;
    case IcKind::lognormal: raw = lognormal_(rng_); break;
  }
  return (raw - center_) * inv_sd_;
}

double ObservationSource::sample(std::int64_t t) {
  const double z = ic_draw();
  if (t <= spec_.change_point) return z;
  return spec_.scale * z + spec_.shift;
}

}  // namespace gmon
