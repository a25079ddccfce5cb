#include "gmon/nonparametric_cusum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gmon/error.hpp"

namespace gmon {

namespace {

// ceil(num / den) for nonnegative integers
constexpr std::size_t ceil_div(std::size_t num, std::size_t den) { return (num + den - 1) / den; }

}  // namespace

std::vector<double> increasing_prior(int d) {
  std::vector<double> alpha(static_cast<std::size_t>(d));
  const double norm = static_cast<double>(d) * (d + 1);
  for (int j = 1; j <= d; ++j) alpha[j - 1] = 2.0 * j / norm;
  return alpha;
}

std::vector<double> decreasing_prior(int d) {
  std::vector<double> alpha(static_cast<std::size_t>(d));
  const double norm = static_cast<double>(d) * (d + 1);
  for (int j = 1; j <= d; ++j) alpha[j - 1] = 2.0 * (d + 1 - j) / norm;
  return alpha;
}

NpParams NpParams::with_default_priors(int d, int n) {
  NpParams p;
  p.d = d;
  p.n = n;
  if (d >= 1) {
    p.alpha1 = increasing_prior(d);
    p.alpha2 = decreasing_prior(d);
  }
  return p;
}

void NpParams::validate() const {
  if (d < 2) throw InvalidParameter("nonparametric cusum needs d >= 2");
  if (n < 2 * d - 1) {
    throw InvalidParameter("nonparametric cusum needs n >= 2d - 1 (n=" + std::to_string(n) +
                           ", d=" + std::to_string(d) + ")");
  }
  const auto du = static_cast<std::size_t>(d);
  if (alpha1.size() != du || alpha2.size() != du) {
    throw InvalidParameter("prior vectors must have length d");
  }
  auto positive = [](double a) { return a > 0.0 && std::isfinite(a); };
  if (!std::all_of(alpha1.begin(), alpha1.end(), positive) ||
      !std::all_of(alpha2.begin(), alpha2.end(), positive)) {
    throw InvalidParameter("prior entries must be positive and finite");
  }
}

SortedHistory::SortedHistory(std::span<const double> values)
    : values_(values.begin(), values.end()) {
  std::sort(values_.begin(), values_.end());
}

void SortedHistory::insert(double x) {
  values_.insert(std::upper_bound(values_.begin(), values_.end(), x), x);
}

std::size_t SortedHistory::count_less(double x) const {
  return static_cast<std::size_t>(std::lower_bound(values_.begin(), values_.end(), x) -
                                  values_.begin());
}

NpSnapshot NpSnapshot::zero(int d) {
  NpSnapshot s;
  for (auto& cell : s.n_cell) cell.assign(static_cast<std::size_t>(d), 0.0);
  return s;
}

NpThresholds np_thresholds(const SortedHistory& history, int d) {
  const std::size_t n = history.size();
  if (d < 1 || n < static_cast<std::size_t>(2 * d - 1)) {
    throw InsufficientHistory("quantile regions need at least 2d - 1 past values, have " +
                              std::to_string(n));
  }
  const auto du = static_cast<std::size_t>(d);
  NpThresholds q;
  q.left_right.resize(du - 1);
  q.center_outward.resize(2 * du - 1);
  for (std::size_t j = 1; j < du; ++j) {
    q.left_right[j - 1] = history.order_statistic(ceil_div(j * n, du));
  }
  for (std::size_t k = 1; k < 2 * du; ++k) {
    q.center_outward[k - 1] = history.order_statistic(ceil_div(k * n, 2 * du));
  }
  return q;
}

NpIndicators np_indicators(double x, const NpThresholds& thresholds) {
  const std::size_t d = thresholds.left_right.size() + 1;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto& q1 = thresholds.left_right;
  const auto& q2 = thresholds.center_outward;
  // q with q[0] = -inf and q[size+1] = +inf, 1-based in between
  auto bound = [&](const std::vector<double>& q, std::size_t k) {
    if (k == 0) return -inf;
    if (k > q.size()) return inf;
    return q[k - 1];
  };
  auto in = [](double v, double lo, double hi) { return v > lo && v <= hi; };

  NpIndicators y;
  y.y1.assign(d, 0);
  y.y2.assign(d, 0);
  for (std::size_t j = 1; j <= d; ++j) {
    const bool last = j == d;
    const bool member = last ? x > bound(q1, d - 1) : in(x, bound(q1, j - 1), bound(q1, j));
    y.y1[j - 1] = member ? 1 : 0;
  }
  for (std::size_t j = 1; j <= d; ++j) {
    bool member;
    if (j == 1) {
      member = in(x, bound(q2, d - 1), bound(q2, d + 1));
    } else if (j == d) {
      member = x <= bound(q2, 1) || x > bound(q2, 2 * d - 1);
    } else {
      member = in(x, bound(q2, d - j), bound(q2, d - j + 1)) ||
               in(x, bound(q2, d + j - 1), bound(q2, d + j));
    }
    y.y2[j - 1] = member ? 1 : 0;
  }
  return y;
}

std::array<int, 2> np_regions(double x, const SortedHistory& history, int d) {
  // x <= x_(k)  <=>  #{h < x} < k
  const std::size_t n = history.size();
  const std::size_t below = history.count_less(x);
  const auto du = static_cast<std::size_t>(d);

  int r1 = d;
  for (std::size_t j = 1; j < du; ++j) {
    if (below < ceil_div(j * n, du)) {
      r1 = static_cast<int>(j);
      break;
    }
  }
  std::size_t bin = 2 * du;
  for (std::size_t k = 1; k < 2 * du; ++k) {
    if (below < ceil_div(k * n, 2 * du)) {
      bin = k;
      break;
    }
  }
  const int r2 = bin <= du ? static_cast<int>(du - bin + 1) : static_cast<int>(bin - du);
  return {r1, r2};
}

NpState np_init(std::span<const double> reference, const NpParams& params) {
  params.validate();
  if (reference.size() != static_cast<std::size_t>(params.n)) {
    throw InvalidParameter("reference sample must hold exactly n = " + std::to_string(params.n) +
                           " values, got " + std::to_string(reference.size()));
  }
  return {SortedHistory(reference), NpSnapshot::zero(params.d)};
}

NpState np_resume(const NpSnapshot& snapshot, std::span<const double> reference,
                  const NpParams& params) {
  NpState state = np_init(reference, params);
  state.core = snapshot;
  return state;
}

void np_step(NpState& state, double x, const NpParams& params) {
  const int d = params.d;
  const auto du = static_cast<std::size_t>(d);
  NpSnapshot& core = state.core;

  for (int c = 0; c < NpSnapshot::kComponents; ++c) {
    auto& cells = core.n_cell[c];
    if (core.shat[c] > 0.0) {
      core.n_count[c] += 1.0;
      const int prev = core.y_prev[c / 2];
      if (prev > 0) cells[prev - 1] += 1.0;
    } else {
      core.n_count[c] = 0.0;
      std::fill(cells.begin(), cells.end(), 0.0);
    }
  }

  const std::array<int, 2> region = np_regions(x, state.history, d);

  const double alpha_total[2] = {std::accumulate(params.alpha1.begin(), params.alpha1.end(), 0.0),
                                 std::accumulate(params.alpha2.begin(), params.alpha2.end(), 0.0)};
  const double dd = static_cast<double>(d);
  for (int c = 0; c < NpSnapshot::kComponents; ++c) {
    const int partition = c / 2;
    const auto& alpha = (c % 2 == 0) ? params.alpha1 : params.alpha2;
    const auto& cells = core.n_cell[c];
    const double total = alpha_total[c % 2] + core.n_count[c];
    double cum = 0.0;
    double increment = 0.0;
    for (std::size_t j = 1; j < du; ++j) {
      cum += alpha[j - 1] + cells[j - 1];
      const double p = cum / total;
      const double level = static_cast<double>(j) / dd;
      const double weight = dd * dd / (static_cast<double>(j) * (dd - static_cast<double>(j)));
      const bool covered = region[partition] <= static_cast<int>(j);
      increment += weight * (covered ? std::log(p / level) : std::log((1.0 - p) / (1.0 - level)));
    }
    increment /= dd;
    core.shat[c] = std::max(0.0, core.shat[c] + increment);
  }

  state.history.insert(x);
  core.y_prev = region;
}

double np_stat(const NpSnapshot& core) {
  return *std::max_element(core.shat.begin(), core.shat.end());
}

}  // namespace gmon
