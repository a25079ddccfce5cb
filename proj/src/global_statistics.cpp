#include "gmon/global_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <charconv>

#include "gmon/error.hpp"

namespace gmon {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double gt_sorted(std::span<const double> sorted, std::span<const double> expected_q) {
  double g = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double excess = sorted[i] - expected_q[i];
    if (excess > 0.0) g += excess * excess;
  }
  return g;
}

double gt(std::span<const double> values, const QuantileTable& table) {
  if (values.size() != table.expected_q.size()) {
    throw InvalidParameter("gt: " + std::to_string(values.size()) + " values for a table of m=" +
                           std::to_string(table.expected_q.size()));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return gt_sorted(sorted, table.expected_q);
}

double logistic_quantile_transform(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidParameter("logistic quantile needs p in (0, 1)");
  }
  return -std::log(1.0 / p - 1.0);
}

double gtz(std::span<const double> u_values) {
  const std::size_t m = u_values.size();
  std::vector<double> u(u_values.begin(), u_values.end());
  for (double v : u) {
    if (!(v > 0.0 && v < 1.0)) throw InvalidParameter("gtz: U values must lie in (0, 1)");
  }
  std::sort(u.begin(), u.end());
  const double half = static_cast<double>(m) - 0.5;
  double g = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const double p = (static_cast<double>(i) - 0.75) / half;
    const double ui = u[i - 1];
    if (ui > p) {
      const double term = std::log((1.0 / ui - 1.0) / (half / (static_cast<double>(i) - 0.75) - 1.0));
      g += term * term;
    }
  }
  return g;
}

double gl_soft(std::span<const double> values, double b) {
  double g = 0.0;
  for (double v : values) g += std::max(v - b, 0.0);
  return g;
}

double g_max(std::span<const double> values) {
  if (values.empty()) throw InvalidParameter("g_max of no values");
  return *std::max_element(values.begin(), values.end());
}

double g_sum(std::span<const double> values) {
  if (values.empty()) throw InvalidParameter("g_sum of no values");
  return std::accumulate(values.begin(), values.end(), 0.0);
}

std::string describe(const GlobalStatKind& kind) {
  switch (kind.index()) {
    case 0: return "gt";
    case 1: return "gz";
    case 2: return "soft(" + format_number(std::get<SoftThreshold>(kind).b) + ")";
    case 3: return "max";
    default: return "sum";
  }
}

GlobalEvaluator::GlobalEvaluator(GlobalStatKind kind, std::shared_ptr<const SteadyStatePool> pool,
                                 std::shared_ptr<const QuantileTable> table, int m)
    : kind_(kind), pool_(std::move(pool)), table_(std::move(table)),
      scratch_(static_cast<std::size_t>(m)) {
  if (std::holds_alternative<QuantileGt>(kind_)) {
    if (!table_ || table_->m != m) {
      throw InvalidParameter("quantile statistic needs a table with matching m");
    }
  }
  if (std::holds_alternative<ZouGz>(kind_) && (!pool_ || pool_->size() < 2)) {
    throw InvalidParameter("logistic statistic needs a pool for the empirical CDF");
  }
  if (const auto* soft = std::get_if<SoftThreshold>(&kind_); soft && !std::isfinite(soft->b)) {
    throw InvalidParameter("soft threshold b must be finite");
  }
}

double GlobalEvaluator::operator()(std::span<const double> local_values) {
  switch (kind_.index()) {
    case 0: {
      std::copy(local_values.begin(), local_values.end(), scratch_.begin());
      std::sort(scratch_.begin(), scratch_.end());
      return gt_sorted(scratch_, table_->expected_q);
    }
    case 1: {
      for (std::size_t i = 0; i < local_values.size(); ++i) {
        scratch_[i] = empirical_cdf(pool_->sorted_values, local_values[i]);
      }
      return gtz(scratch_);
    }
    case 2: return gl_soft(local_values, std::get<SoftThreshold>(kind_).b);
    case 3: return g_max(local_values);
    default: return g_sum(local_values);
  }
}

}  // namespace gmon
