#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "gbtail/sample.hpp"

namespace gbtail {

enum class Flag : std::uint8_t { None, DK, nDK, pDK };

const char* flag_name(Flag flag);

/// Per-order-statistic U-test report. Ranks are 1-based ascending; the
/// tail-end window is the top `tail_end_window` ranks. DK flags require
/// p <= low inside the window, nDK p >= high inside the window; the same
/// extremes in the tail region but before the window are pDK ("potential"):
/// there they indicate a poor fit rather than an outlier.
struct UTestReport {
  Eigen::ArrayXd pvalues;             // length m
  std::vector<Flag> classifications;  // length m
  std::pair<std::int64_t, std::int64_t> tail_region{1, 1};  // inclusive ranks
  std::int64_t tail_end_window = 0;
  double low = 0.05;
  double high = 0.95;

  std::int64_t count(Flag flag) const;
};

/// p_k = 1 - I(F(x_k); k, m-k+1) for each ascending rank k: the probability
/// of exceeding the observed k-th order statistic under the null that all
/// observations come from `cdf`.
Eigen::ArrayXd u_test_pvalues(const SortedSample& sample,
                              const std::function<double(double)>& cdf);

/// Default tail-end window: max(5, ceil(0.5% of m)).
std::int64_t default_tail_end_window(std::int64_t m);

UTestReport classify(const Eigen::ArrayXd& pvalues,
                     std::pair<std::int64_t, std::int64_t> tail_region,
                     std::int64_t tail_end_window,
                     std::pair<double, double> thresholds = {0.05, 0.95});

/// Conditional tail CDF implied by a log-log line of the given slope,
/// renormalized above x0: F(x) = 1 - (x/x0)^slope for x >= x0. This is the
/// form fed to the U-test when testing a linear tail fit.
std::function<double(double)> lf_tail_cdf(double slope, double x0);

}  // namespace gbtail
