#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gbtail/distributions.hpp"
#include "gbtail/empirical.hpp"
#include "gbtail/sample.hpp"

namespace gbtail {

enum class Family { mGB, GB2 };

std::string family_name(Family family);

struct FitConfig {
  int starts = 8;            // multi-start count
  int max_iter = 4000;       // simplex cycles per start
  double ftol = 1e-9;        // simplex tolerance on the log-likelihood
  int threads = 1;           // concurrent starts
  bool log_uniform_prior = false;  // add -sum(ln theta_i) to the objective
};

struct FitResult {
  Family family = Family::GB2;
  std::variant<GBParams, GB2Params> params;
  double log_likelihood = 0.0;
  double ks_stat = 0.0;
  bool converged = false;
  std::int64_t iterations = 0;
  std::vector<std::string> warnings;

  const GBParams& mgb_params() const { return std::get<GBParams>(params); }
  const GB2Params& gb2_params() const { return std::get<GB2Params>(params); }

  /// Asymptotic log-log CCDF slope implied by the fit: -alpha*q for GB2,
  /// -alpha*(q+1) for the mGB mid-range regime. The corresponding density
  /// falls one power faster (-alpha*q - 1 for GB2); published slope tables
  /// sometimes quote that PDF slope instead, so compare carefully.
  double ccdf_slope() const;

  std::function<double(double)> cdf() const;
  std::function<double(double)> ccdf() const;
  std::function<double(double)> pdf() const;
};

/// Maximum-likelihood fit over log-transformed parameters by multi-start
/// Nelder-Mead. For mGB the upper support endpoint is reparameterized as
/// max(sample) * (1 + softplus(theta)) so beta1 > max(sample) holds by
/// construction. Non-convergence is reported in the flag, never silently.
FitResult fit_mle(const SortedSample& sample, Family family,
                  const FitConfig& config = {});

/// Sup-norm distance between the empirical CDF and `cdf`, evaluated on both
/// sides of every step.
double ks_statistic(const SortedSample& sample,
                    const std::function<double(double)>& cdf);

/// Exclusion policies for tail linear fits. ManualExclude drops the
/// n largest points (LF-1, "visually excluded outliers"); FractionOfMax
/// drops every point with x above fraction * max(x) (LF-2).
struct ManualExclude {
  std::int64_t n_points = 0;
};
struct FractionOfMax {
  double fraction = 0.9;
};
using ExclusionPolicy = std::variant<ManualExclude, FractionOfMax>;

struct TailFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  ExclusionPolicy policy;
  std::int64_t tail_start_rank = 0;      // 1-based ascending rank
  std::vector<std::int64_t> excluded;    // ascending ranks of dropped points
  std::int64_t points_used = 0;
  double x_start = 0.0;                  // smallest x entering the fit
};

/// Raised when fewer than 5 points remain for a tail fit.
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ordinary least squares of ln s on ln x over the curve points at
/// ascending rank >= tail_start_rank, minus the policy's exclusions.
TailFit tail_linear_fit(const CcdfCurve& curve, std::int64_t tail_start_rank,
                        const ExclusionPolicy& policy);

/// Rank of the value at the given quantile (default start of the top
/// decile), the default tail_start_rank.
std::int64_t rank_at_quantile(const SortedSample& sample, double quantile);

}  // namespace gbtail
