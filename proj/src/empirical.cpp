#include "gbtail/empirical.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gbtail/specfun.hpp"

namespace gbtail {

CcdfCurve build_ccdf(const SortedSample& sample) {
  const auto& v = sample.values();
  const std::int64_t m = sample.m();
  std::vector<double> xs;
  std::vector<double> ss;
  xs.reserve(static_cast<std::size_t>(m));
  ss.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    if (i > 0 && v[i] == v[i - 1]) continue;  // ties carry the upper count
    xs.push_back(v[i]);
    ss.push_back(static_cast<double>(m - i) / static_cast<double>(m));
  }
  CcdfCurve curve;
  curve.x = Eigen::Map<const Eigen::ArrayXd>(xs.data(), xs.size());
  curve.s = Eigen::Map<const Eigen::ArrayXd>(ss.data(), ss.size());
  curve.m = m;
  curve.convention = "s_i = #(values >= x_i) / m";
  return curve;
}

CcdfCurve model_ccdf_curve(const CcdfCurve& empirical,
                           const std::function<double(double)>& ccdf) {
  CcdfCurve curve;
  curve.x = empirical.x;
  curve.s = Eigen::ArrayXd(empirical.x.size());
  for (Eigen::Index i = 0; i < curve.x.size(); ++i) {
    curve.s[i] = ccdf(curve.x[i]);
  }
  curve.m = empirical.m;
  curve.convention = "model";
  return curve;
}

CiBand ci_band(const CcdfCurve& curve, std::int64_t m, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("ci_band level must lie in (0,1)");
  }
  if (m < 1) throw std::domain_error("ci_band requires m >= 1");
  CiBand band;
  band.level = level;
  band.lower = Eigen::ArrayXd(curve.s.size());
  band.upper = Eigen::ArrayXd(curve.s.size());
  const double lo_u = 0.5 * (1.0 - level);
  const double hi_u = 0.5 * (1.0 + level);
  const double md = static_cast<double>(m);
  for (Eigen::Index i = 0; i < curve.s.size(); ++i) {
    const double s = curve.s[i];
    if (s <= 0.0 || s >= 1.0) {
      band.lower[i] = s;
      band.upper[i] = s;
      continue;
    }
    band.lower[i] = static_cast<double>(binom_quantile(lo_u, m, s)) / md;
    band.upper[i] = static_cast<double>(binom_quantile(hi_u, m, s)) / md;
  }
  return band;
}

LogBinnedPdf log_binned_pdf(const SortedSample& sample,
                            std::int64_t bins_per_decade) {
  if (bins_per_decade < 1) {
    throw std::domain_error("log_binned_pdf requires bins_per_decade >= 1");
  }
  const auto& v = sample.values();
  const double md = static_cast<double>(sample.m());
  const double bpd = static_cast<double>(bins_per_decade);

  auto edge = [&](std::int64_t k) {
    return std::pow(10.0, static_cast<double>(k) / bpd);
  };
  auto bin_index = [&](double x) {
    std::int64_t k =
        static_cast<std::int64_t>(std::floor(std::log10(x) * bpd));
    // guard against rounding at edges
    while (x < edge(k)) --k;
    while (x >= edge(k + 1)) ++k;
    return k;
  };

  const std::int64_t k_min = bin_index(sample.min());
  const std::int64_t k_max = bin_index(sample.max());
  const std::int64_t n_bins = k_max - k_min + 1;

  Eigen::ArrayXd counts = Eigen::ArrayXd::Zero(n_bins);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    counts[bin_index(v[i]) - k_min] += 1.0;
  }

  LogBinnedPdf out;
  out.center = Eigen::ArrayXd(n_bins);
  out.density = Eigen::ArrayXd(n_bins);
  out.width = Eigen::ArrayXd(n_bins);
  for (std::int64_t j = 0; j < n_bins; ++j) {
    const double lo = edge(k_min + j);
    const double hi = edge(k_min + j + 1);
    out.center[j] = std::sqrt(lo * hi);
    out.width[j] = hi - lo;
    out.density[j] = counts[j] / (md * (hi - lo));
  }
  return out;
}

}  // namespace gbtail
