// Test-only numerical oracles, kept independent of the library code paths
// they are used to check. Quadrature is double-exponential (tanh-sinh), the
// binomial CDF is direct summation, and log-binomial coefficients come from
// std::lgamma rather than the library's own gamma kernel.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>

namespace oracle {

// tanh-sinh quadrature on (a, b). Handles integrable endpoint
// singularities; f is never evaluated exactly at a or b.
inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double pi_half = 1.5707963267948966;

  auto eval_pair = [&](double t, double h) -> double {
    const double u = pi_half * std::sinh(t);
    const double ch = std::cosh(u);
    const double w = h * half * pi_half * std::cosh(t) / (ch * ch);
    const double th = std::tanh(u);
    double sum = 0.0;
    const double xp = mid + half * th;
    const double xm = mid - half * th;
    if (xp > a && xp < b) {
      const double v = f(xp);
      if (std::isfinite(v)) sum += w * v;
    }
    if (t != 0.0 && xm > a && xm < b) {
      const double v = f(xm);
      if (std::isfinite(v)) sum += w * v;
    }
    return sum;
  };

  const double t_max = 4.0;
  double h = 1.0;
  double result = eval_pair(0.0, h);
  for (double t = h; t <= t_max; t += h) result += eval_pair(t, h);

  for (int level = 1; level <= 12; ++level) {
    h *= 0.5;
    double add = 0.0;
    for (double t = h; t <= t_max; t += 2.0 * h) add += eval_pair(t, h);
    const double refined = 0.5 * result + add;
    const double change = std::fabs(refined - result);
    result = refined;
    if (level >= 3 && change <= tol * std::fabs(result) + 1e-300) break;
  }
  return result;
}

// Integral over (0, inf) of a density-like integrand with power-law decay,
// via the substitution x = e^u. `scale` sets the decades covered.
inline double integrate_halfline(const std::function<double(double)>& f,
                                 double scale, double tol = 1e-10) {
  auto g = [&](double u) { return f(std::exp(u)) * std::exp(u); };
  return integrate(g, std::log(scale * 1e-14), std::log(scale * 1e14), tol);
}

inline double log_choose(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// P[X <= k], X ~ Binomial(n, s), by direct summation.
inline double binom_cdf_brute(std::int64_t k, std::int64_t n, double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return k >= n ? 1.0 : 0.0;
  long double total = 0.0L;
  for (std::int64_t j = 0; j <= k; ++j) {
    const double lp = log_choose(n, j) + j * std::log(s) +
                      (n - j) * std::log1p(-s);
    total += std::exp(static_cast<long double>(lp));
  }
  return static_cast<double>(std::min(total, 1.0L));
}

// Asymptotic two-sided Kolmogorov critical value: D * sqrt(N) threshold at
// significance alpha (1.6276 at 1%, 1.3581 at 5%).
inline double ks_critical(double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

// Local log-log slope d ln f / d ln x by central differencing.
inline double loglog_slope(const std::function<double(double)>& f, double x,
                           double delta = 0.01) {
  const double up = f(x * std::exp(delta));
  const double dn = f(x * std::exp(-delta));
  return (std::log(up) - std::log(dn)) / (2.0 * delta);
}

}  // namespace oracle
