#include "gbtail/dragonking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gbtail/specfun.hpp"

namespace gbtail {

const char* flag_name(Flag flag) {
  switch (flag) {
    case Flag::DK:
      return "DK";
    case Flag::nDK:
      return "nDK";
    case Flag::pDK:
      return "pDK";
    default:
      return "none";
  }
}

std::int64_t UTestReport::count(Flag flag) const {
  return std::count(classifications.begin(), classifications.end(), flag);
}

Eigen::ArrayXd u_test_pvalues(const SortedSample& sample,
                              const std::function<double(double)>& cdf) {
  const std::int64_t m = sample.m();
  Eigen::ArrayXd pvalues(m);
  for (std::int64_t k = 1; k <= m; ++k) {
    const double f = cdf(sample.values()[k - 1]);
    if (!(f >= 0.0 && f <= 1.0)) {
      throw std::domain_error(
          "u_test_pvalues: cdf returned " + std::to_string(f) +
          " outside [0,1] at x = " + std::to_string(sample.values()[k - 1]));
    }
    pvalues[k - 1] =
        1.0 - reg_inc_beta(f, static_cast<double>(k),
                           static_cast<double>(m - k + 1));
  }
  return pvalues;
}

std::int64_t default_tail_end_window(std::int64_t m) {
  return std::max<std::int64_t>(
      5, static_cast<std::int64_t>(
             std::ceil(0.005 * static_cast<double>(m))));
}

UTestReport classify(const Eigen::ArrayXd& pvalues,
                     std::pair<std::int64_t, std::int64_t> tail_region,
                     std::int64_t tail_end_window,
                     std::pair<double, double> thresholds) {
  const std::int64_t m = pvalues.size();
  const auto [low, high] = thresholds;
  if (!(low > 0.0 && low < high && high < 1.0)) {
    throw std::invalid_argument("classify: thresholds must satisfy "
                                "0 < low < high < 1");
  }
  if (tail_region.first < 1 || tail_region.second > m ||
      tail_region.first > tail_region.second) {
    throw std::invalid_argument("classify: empty or out-of-range tail region");
  }
  if (tail_end_window < 0) {
    throw std::invalid_argument("classify: negative tail-end window");
  }

  UTestReport report;
  report.pvalues = pvalues;
  report.tail_region = tail_region;
  report.tail_end_window = tail_end_window;
  report.low = low;
  report.high = high;
  report.classifications.assign(static_cast<std::size_t>(m), Flag::None);

  const std::int64_t window_start = m - tail_end_window + 1;
  for (std::int64_t k = 1; k <= m; ++k) {
    const double p = pvalues[k - 1];
    const bool extreme_low = p <= low;
    const bool extreme_high = p >= high;
    if (!extreme_low && !extreme_high) continue;
    if (k >= window_start) {
      report.classifications[static_cast<std::size_t>(k - 1)] =
          extreme_low ? Flag::DK : Flag::nDK;
    } else if (k >= tail_region.first && k <= tail_region.second) {
      report.classifications[static_cast<std::size_t>(k - 1)] = Flag::pDK;
    }
  }
  return report;
}

std::function<double(double)> lf_tail_cdf(double slope, double x0) {
  if (!(x0 > 0.0)) {
    throw std::domain_error("lf_tail_cdf requires x0 > 0");
  }
  if (!(slope < 0.0)) {
    throw std::domain_error("lf_tail_cdf requires a negative slope");
  }
  return [slope, x0](double x) {
    if (x <= x0) return 0.0;
    return 1.0 - std::pow(x / x0, slope);
  };
}

}  // namespace gbtail
