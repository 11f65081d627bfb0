#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>

#include "gbtail/sample.hpp"

namespace gbtail {

/// Rank-based CCDF: one point per distinct value, x ascending and s
/// strictly decreasing. For the i-th largest distinct value,
/// s = (#observations >= value) / m, so the maximum plots at s = 1/m and
/// the curve never touches zero (log-log friendly).
struct CcdfCurve {
  Eigen::ArrayXd x;
  Eigen::ArrayXd s;
  std::int64_t m = 0;       // size of the underlying sample
  std::string convention;   // tag identifying the rank rule
};

/// Two-sided equal-tail binomial band around a CCDF curve.
struct CiBand {
  double level = 0.95;
  Eigen::ArrayXd lower;
  Eigen::ArrayXd upper;
};

/// Geometric-bin histogram normalized to integrate to one.
struct LogBinnedPdf {
  Eigen::ArrayXd center;   // geometric bin centers
  Eigen::ArrayXd density;  // count / (m * bin_width)
  Eigen::ArrayXd width;    // linear bin widths
};

CcdfCurve build_ccdf(const SortedSample& sample);

/// CCDF of a model evaluated on the empirical curve's abscissae; useful for
/// drawing CI bands around a fitted curve.
CcdfCurve model_ccdf_curve(const CcdfCurve& empirical,
                           const std::function<double(double)>& ccdf);

/// Binomial-inversion band: at a point with CCDF s the exceedance count is
/// Binomial(m, s), so lower = quantile((1-level)/2)/m and
/// upper = quantile((1+level)/2)/m. Degenerate s in {0,1} collapses the
/// band to the point.
CiBand ci_band(const CcdfCurve& curve, std::int64_t m, double level = 0.95);

LogBinnedPdf log_binned_pdf(const SortedSample& sample,
                            std::int64_t bins_per_decade);

}  // namespace gbtail
