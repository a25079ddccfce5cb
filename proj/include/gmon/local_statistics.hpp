#pragma once

namespace gmon {

// Known-shift CUSUM for a positive mean shift of size mu.
struct CusumParams {
  double mu = 0.5;

  void validate() const;
  friend bool operator==(const CusumParams&, const CusumParams&) = default;
};

struct CusumState {
  double s_plus = 0.0;

  friend bool operator==(const CusumState&, const CusumState&) = default;
};

// s' = max(0, s + mu * (x - mu / 2))
inline CusumState cusum_step(CusumState state, double x, const CusumParams& params) {
  const double next = state.s_plus + params.mu * (x - 0.5 * params.mu);
  return {next > 0.0 ? next : 0.0};
}

inline double cusum_stat(const CusumState& state) { return state.s_plus; }

// Two-sided CUSUM with plug-in shift estimates. `s0` and `t0` act as a prior
// (pseudo-sum and pseudo-count) on the post-change mean; `rho` bounds the
// estimates away from zero.
struct AdaptiveParams {
  double rho = 0.25;
  double s0 = 1.0;
  double t0 = 4.0;

  void validate() const;
  friend bool operator==(const AdaptiveParams&, const AdaptiveParams&) = default;
};

// c1/c2 track positive/negative shifts. (s_j, t_j) are the running sum and
// count of observations since c_j last left zero; x_prev is the observation
// consumed by the next (s, t) update.
struct AdaptiveCusumState {
  double c1 = 0.0;
  double c2 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double x_prev = 0.0;

  friend bool operator==(const AdaptiveCusumState&, const AdaptiveCusumState&) = default;
};

struct MuHats {
  double positive;  // >= rho
  double negative;  // <= -rho
};

// Throws InvalidState if a denominator t0 + t_j is zero.
MuHats adaptive_mu_hats(const AdaptiveCusumState& state, const AdaptiveParams& params);

// One observation. Order within the step: the (s, t) pairs absorb x_prev
// using the previous c values, then the shift estimates are formed, then
// c1/c2 are updated with x, and finally x becomes x_prev.
AdaptiveCusumState adaptive_cusum_step(AdaptiveCusumState state, double x,
                                       const AdaptiveParams& params);

inline double adaptive_stat(const AdaptiveCusumState& state) {
  return state.c1 > state.c2 ? state.c1 : state.c2;
}

}  // namespace gmon
