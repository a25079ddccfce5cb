#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace gmon {

// Distribution-free self-starting CUSUM built on sample-quantile regions.
//
// Each step partitions the line with quantiles of all past observations
// (reference sample included), in two ways: d left-to-right regions and d
// center-outward regions. The region the new observation falls in is scored
// against Bayes-smoothed cell probabilities by four directional CUSUMs:
//
//   component (k1, k2)   regions          prior     targets
//   (1, 1)               left-to-right    alpha1    location increase
//   (1, 2)               left-to-right    alpha2    location decrease
//   (2, 1)               center-outward   alpha1    scale increase
//   (2, 2)               center-outward   alpha2    scale decrease
//
// Components are stored in that order (index 2*(k1-1) + (k2-1)).

struct NpParams {
  int d = 20;  // number of regions
  int n = 40;  // reference sample size, must satisfy n >= 2d - 1
  std::vector<double> alpha1;
  std::vector<double> alpha2;

  // d regions, reference size n, linearly increasing/decreasing priors of
  // unit total mass.
  static NpParams with_default_priors(int d = 20, int n = 40);

  void validate() const;
  friend bool operator==(const NpParams&, const NpParams&) = default;
};

// alpha_j = 2j / (d(d+1)), j = 1..d
std::vector<double> increasing_prior(int d);
// alpha_j = 2(d+1-j) / (d(d+1)), j = 1..d
std::vector<double> decreasing_prior(int d);

// Multiset of past observations kept in ascending order.
class SortedHistory {
 public:
  SortedHistory() = default;
  explicit SortedHistory(std::span<const double> values);

  void insert(double x);
  std::size_t size() const { return values_.size(); }
  // 1-based order statistic x_(k).
  double order_statistic(std::size_t k) const { return values_[k - 1]; }
  // #{h in history : h < x}
  std::size_t count_less(double x) const;
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
};

// Everything except the history. This is what a steady-state pool stores.
struct NpSnapshot {
  static constexpr int kComponents = 4;

  std::array<double, kComponents> shat{};
  std::array<double, kComponents> n_count{};
  std::array<std::vector<double>, kComponents> n_cell;  // each of length d
  // Region (1..d) of the previous observation under each partition; 0 before
  // the first observation.
  std::array<int, 2> y_prev{};

  static NpSnapshot zero(int d);
  friend bool operator==(const NpSnapshot&, const NpSnapshot&) = default;
};

struct NpState {
  SortedHistory history;
  NpSnapshot core;
};

struct NpThresholds {
  std::vector<double> left_right;      // d - 1 values at j/d
  std::vector<double> center_outward;  // 2d - 1 values at k/(2d)
};

// Quantiles by inverse empirical CDF: the value at level p is the
// ceil(p * N)-th order statistic. Throws InsufficientHistory when the
// history holds fewer than 2d - 1 values.
NpThresholds np_thresholds(const SortedHistory& history, int d);

struct NpIndicators {
  std::vector<int> y1;  // one-hot over left-to-right regions
  std::vector<int> y2;  // one-hot over center-outward regions
};

NpIndicators np_indicators(double x, const NpThresholds& thresholds);

// Region indices (1..d) of x under both partitions, computed from the rank
// of x in the history. Agrees with np_indicators on np_thresholds.
std::array<int, 2> np_regions(double x, const SortedHistory& history, int d);

// Cold start from a reference sample of exactly n values.
NpState np_init(std::span<const double> reference, const NpParams& params);

// Pairs a stored snapshot with a fresh reference history.
NpState np_resume(const NpSnapshot& snapshot, std::span<const double> reference,
                  const NpParams& params);

void np_step(NpState& state, double x, const NpParams& params);

double np_stat(const NpSnapshot& core);
inline double np_stat(const NpState& state) { return np_stat(state.core); }

}  // namespace gmon
