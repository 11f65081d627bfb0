#pragma once

#include <cstdint>

#include "gbtail/sample.hpp"

namespace gbtail {

/// Parameters of the five-parameter generalized beta family (GB, mGB).
/// beta1 and beta2 are scales in the units of the variable, alpha, p, q are
/// shapes; all strictly positive. The support of GB/mGB is [0, beta1].
struct GBParams {
  double alpha;
  double beta1;
  double beta2;
  double p;
  double q;

  /// Throws std::domain_error unless all five parameters are positive
  /// and finite.
  void validate() const;

  /// True when beta2 < beta1, the regime in which the mid-range of the
  /// CCDF follows a power law. Callers that rely on the power-law reading
  /// should warn when this is false; the evaluators work either way.
  bool power_law_regime() const { return beta2 < beta1; }
};

/// Parameters of the four-parameter beta-prime restriction (GB2, mGB2)
/// with support (0, inf).
struct GB2Params {
  double alpha;
  double beta2;
  double p;
  double q;

  void validate() const;
};

// Densities and distribution functions. The *_pdf functions return the
// density (log-space evaluation internally); *_log_pdf return its natural
// log and are what likelihood code should call. For q < 1 the GB/mGB
// density diverges at x = beta1; pdf evaluators return +inf there.

double gb_log_pdf(double x, const GBParams& params);
double gb_pdf(double x, const GBParams& params);

double mgb_log_pdf(double x, const GBParams& params);
double mgb_pdf(double x, const GBParams& params);

/// mGB distribution function on [0, beta1]; throws outside the support.
double mgb_cdf(double x, const GBParams& params);
double mgb_ccdf(double x, const GBParams& params);

double gb2_log_pdf(double x, const GB2Params& params);
double gb2_pdf(double x, const GB2Params& params);
double mgb2_log_pdf(double x, const GB2Params& params);
double mgb2_pdf(double x, const GB2Params& params);

double gb2_cdf(double x, const GB2Params& params);
double gb2_ccdf(double x, const GB2Params& params);

// Closed-form approximations of the GB and mGB CCDFs near the upper
// support endpoint. Diagnostics only -- never substituted into fitting.
// Their ratio is (1 + p/q) * (beta2/beta1)^alpha identically.
double gb_ccdf_near_beta1(double x, const GBParams& params);
double mgb_ccdf_near_beta1(double x, const GBParams& params);

/// n independent GB2 draws via x = beta2 * (B/(1-B))^(1/alpha) with
/// B ~ Beta(p, q) from inversion of I(.; p, q). Deterministic in the seed.
SortedSample sample_gb2(const GB2Params& params, std::int64_t n,
                        std::uint64_t seed);

/// n independent mGB draws by bracketed numeric inversion of the mGB CDF
/// on [0, beta1], to a tolerance of 1e-10 * beta1 in x. Deterministic in
/// the seed.
SortedSample sample_mgb(const GBParams& params, std::int64_t n,
                        std::uint64_t seed);

}  // namespace gbtail
