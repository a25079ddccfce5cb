#include "gmon/local_statistics.hpp"

#include <algorithm>
#include <cmath>

#include "gmon/error.hpp"

namespace gmon {

void CusumParams::validate() const {
  if (mu == 0.0 || !std::isfinite(mu)) {
    throw InvalidParameter("cusum mu must be finite and nonzero");
  }
}

void AdaptiveParams::validate() const {
  if (!(rho > 0.0)) throw InvalidParameter("adaptive rho must be > 0");
  if (!(s0 >= 0.0)) throw InvalidParameter("adaptive s0 must be >= 0");
  if (!(t0 >= 0.0)) throw InvalidParameter("adaptive t0 must be >= 0");
}

MuHats adaptive_mu_hats(const AdaptiveCusumState& state, const AdaptiveParams& params) {
  const double den1 = params.t0 + state.t1;
  const double den2 = params.t0 + state.t2;
  if (den1 == 0.0 || den2 == 0.0) {
    throw InvalidState("adaptive cusum: zero denominator in shift estimate (t0 + T = 0)");
  }
  return {std::max(params.rho, (params.s0 + state.s1) / den1),
          std::min(-params.rho, (-params.s0 + state.s2) / den2)};
}

AdaptiveCusumState adaptive_cusum_step(AdaptiveCusumState state, double x,
                                       const AdaptiveParams& params) {
  if (state.c1 > 0.0) {
    state.s1 += state.x_prev;
    state.t1 += 1.0;
  } else {
    state.s1 = 0.0;
    state.t1 = 0.0;
  }
  if (state.c2 > 0.0) {
    state.s2 += state.x_prev;
    state.t2 += 1.0;
  } else {
    state.s2 = 0.0;
    state.t2 = 0.0;
  }

  const MuHats mu = adaptive_mu_hats(state, params);
  state.c1 = std::max(0.0, state.c1 + mu.positive * (x - 0.5 * mu.positive));
  state.c2 = std::max(0.0, state.c2 + mu.negative * (x - 0.5 * mu.negative));
  state.x_prev = x;
  return state;
}

}  // namespace gmon
