#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

double cusum(std::span<const double> xs, double mu) {
  const std::size_t t = xs.size();
  double best = 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    double sum = 0.0;
    for (std::size_t j = k; j < t; ++j) sum += mu * (xs[j] - mu / 2.0);
    best = std::max(best, sum);
  }
  return best;
}

int left_right_region(double x, std::span<const double> q) {
  const int d = static_cast<int>(q.size()) + 1;
  const double inf = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= d; ++j) {
    const double lo = j == 1 ? -inf : q[j - 2];
    const double hi = j == d ? inf : q[j - 1];
    if (x > lo && x <= hi) return j;
  }
  return d;  // x == +inf
}

int center_outward_region(double x, std::span<const double> q) {
  const int d = (static_cast<int>(q.size()) + 1) / 2;
  const double inf = std::numeric_limits<double>::infinity();
  // q_0 = -inf, q_{2d} = +inf, 1-based
  auto at = [&](int k) { return k == 0 ? -inf : (k == 2 * d ? inf : q[k - 1]); };
  for (int j = 1; j <= d; ++j) {
    const bool inner = x > at(d - j) && x <= at(d - j + 1);
    const bool outer = x > at(d + j - 1) && x <= at(d + j);
    if (inner || outer) return j;
  }
  return d;
}

std::vector<std::array<double, 4>> np_trajectory(std::span<const double> reference,
                                                 std::span<const double> xs,
                                                 const gmon::NpParams& params) {
  const int d = params.d;
  std::vector<double> seen(reference.begin(), reference.end());
  std::vector<std::array<int, 2>> regions;  // per step
  std::vector<std::array<double, 4>> shat;  // per step
  const std::array<const std::vector<double>*, 2> priors{&params.alpha1, &params.alpha2};

  for (std::size_t t = 0; t < xs.size(); ++t) {
    std::vector<double> sorted = seen;
    std::sort(sorted.begin(), sorted.end());
    const auto big_n = static_cast<long>(sorted.size());
    std::vector<double> q1;
    std::vector<double> q2;
    for (int j = 1; j < d; ++j) {
      const long k = (j * big_n + d - 1) / d;
      q1.push_back(sorted[static_cast<std::size_t>(k - 1)]);
    }
    for (int j = 1; j < 2 * d; ++j) {
      const long k = (j * big_n + 2 * d - 1) / (2 * d);
      q2.push_back(sorted[static_cast<std::size_t>(k - 1)]);
    }
    const std::array<int, 2> region{left_right_region(xs[t], q1),
                                    center_outward_region(xs[t], q2)};

    std::array<double, 4> next{};
    for (int c = 0; c < 4; ++c) {
      const int k1 = c / 2;
      const auto& alpha = *priors[static_cast<std::size_t>(c % 2)];
      // Cells count regions since the last step whose Shat was zero.
      std::vector<double> cells(static_cast<std::size_t>(d), 0.0);
      double count = 0.0;
      for (std::size_t s = t; s-- > 0;) {
        if (shat[s][c] == 0.0) break;
        cells[static_cast<std::size_t>(regions[s][k1] - 1)] += 1.0;
        count += 1.0;
      }
      double alpha_sum = 0.0;
      for (double a : alpha) alpha_sum += a;

      double sum = 0.0;
      for (int j = 1; j < d; ++j) {
        double p = 0.0;
        for (int l = 1; l <= j; ++l) {
          p += (alpha[static_cast<std::size_t>(l - 1)] + cells[static_cast<std::size_t>(l - 1)]) /
               (alpha_sum + count);
        }
        const double z = region[k1] <= j ? 1.0 : 0.0;
        const double level = static_cast<double>(j) / d;
        const double w = static_cast<double>(d) * d / (static_cast<double>(j) * (d - j));
        sum += w * (z * std::log(p / level) + (1.0 - z) * std::log((1.0 - p) / (1.0 - level)));
      }
      const double prev = t == 0 ? 0.0 : shat[t - 1][c];
      next[c] = std::max(0.0, prev + sum / d);
    }
    shat.push_back(next);
    regions.push_back(region);
    seen.push_back(xs[t]);
  }
  return shat;
}

}  // namespace oracle
