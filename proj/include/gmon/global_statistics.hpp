#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gmon/steady_state_pool.hpp"

namespace gmon {

// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

// Sum of squared exceedances of the sorted local statistics over their
// expected IC quantiles:
//
//   G = sum_i (W_(i) - q_(i))^2 * [W_(i) > q_(i)]
//
// The input need not be sorted. Throws InvalidParameter on a length mismatch.
double gt(std::span<const double> values, const QuantileTable& table);

// Same, for values already sorted ascending.
double gt_sorted(std::span<const double> sorted, std::span<const double> expected_q);

// Logistic-scale goodness-of-fit statistic on IC probabilities U in (0, 1):
//
//   G^Z = sum_i {log[(1/U_(i) - 1) / (1/p_i - 1)]}^2 * [U_(i) > p_i],
//   p_i = (i - 3/4) / (m - 1/2)
double gtz(std::span<const double> u_values);

// Standard logistic quantile function -log(1/p - 1).
double logistic_quantile_transform(double p);

// sum_i max(W_i - b, 0)
double gl_soft(std::span<const double> values, double b);

double g_max(std::span<const double> values);
double g_sum(std::span<const double> values);

struct QuantileGt {
  friend bool operator==(QuantileGt, QuantileGt) = default;
};
struct ZouGz {
  friend bool operator==(ZouGz, ZouGz) = default;
};
struct SoftThreshold {
  double b = 0.5;
  friend bool operator==(SoftThreshold, SoftThreshold) = default;
};
struct MaxStat {
  friend bool operator==(MaxStat, MaxStat) = default;
};
struct SumStat {
  friend bool operator==(SumStat, SumStat) = default;
};

using GlobalStatKind = std::variant<QuantileGt, ZouGz, SoftThreshold, MaxStat, SumStat>;

// Short identifier: "gt", "gz", "soft(b)", "max", "sum". b is printed in
// shortest round-trip form.
std::string describe(const GlobalStatKind& kind);

// Evaluates one global statistic kind per tick. Keeps the quantile table and
// a scratch buffer, so one evaluator must not be shared between threads.
class GlobalEvaluator {
 public:
  GlobalEvaluator(GlobalStatKind kind, std::shared_ptr<const SteadyStatePool> pool,
                  std::shared_ptr<const QuantileTable> table, int m);

  double operator()(std::span<const double> local_values);

 private:
  GlobalStatKind kind_;
  std::shared_ptr<const SteadyStatePool> pool_;
  std::shared_ptr<const QuantileTable> table_;
  std::vector<double> scratch_;
};

}  // namespace gmon
