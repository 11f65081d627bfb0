#include "gbtail/distributions.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbtail/specfun.hpp"

namespace gbtail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log1pexp(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::fabs(t)));
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(name) +
                            " must be positive and finite, got " +
                            std::to_string(v));
  }
}

// 53-bit uniform strictly inside (0, 1); avoids the implementation-defined
// behavior of std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Shared log-space pieces of the bounded-family evaluators at 0 < x < beta1.
struct BoundedPieces {
  double t1;      // alpha * ln(x/beta1), < 0
  double t2;      // alpha * ln(x/beta2)
  double rba;     // (beta2/beta1)^alpha
  double ln_num;  // ln(1 - (x/beta1)^alpha)
  double ln_den;  // ln(1 + (x/beta2)^alpha)
};

BoundedPieces bounded_pieces(double x, const GBParams& params) {
  const double lx = std::log(x);
  BoundedPieces pc;
  pc.t1 = params.alpha * (lx - std::log(params.beta1));
  pc.t2 = params.alpha * (lx - std::log(params.beta2));
  pc.rba =
      std::exp(params.alpha * (std::log(params.beta2) - std::log(params.beta1)));
  pc.ln_num = std::log1p(-std::exp(pc.t1));
  pc.ln_den = log1pexp(pc.t2);
  return pc;
}

}  // namespace

void GBParams::validate() const {
  require_positive(alpha, "alpha");
  require_positive(beta1, "beta1");
  require_positive(beta2, "beta2");
  require_positive(p, "p");
  require_positive(q, "q");
}

void GB2Params::validate() const {
  require_positive(alpha, "alpha");
  require_positive(beta2, "beta2");
  require_positive(p, "p");
  require_positive(q, "q");
}

double gb_log_pdf(double x, const GBParams& params) {
  params.validate();
  if (!(x >= 0.0)) throw std::domain_error("gb_pdf requires x >= 0");
  if (x > params.beta1) return -kInf;
  const double ap = params.alpha * params.p;
  if (x == 0.0 && ap != 1.0) return ap > 1.0 ? -kInf : kInf;
  const auto pc = bounded_pieces(x, params);
  const double power_term =
      ap == 1.0 ? 0.0 : (ap - 1.0) * pc.t2 / params.alpha;
  const double edge_term =
      params.q == 1.0 ? 0.0 : (params.q - 1.0) * pc.ln_num;
  return std::log(params.alpha) + params.p * std::log1p(pc.rba) + power_term -
         (params.p + params.q) * pc.ln_den + edge_term -
         std::log(params.beta2) - log_beta(params.p, params.q);
}

double gb_pdf(double x, const GBParams& params) {
  return std::exp(gb_log_pdf(x, params));
}

double mgb_log_pdf(double x, const GBParams& params) {
  params.validate();
  if (!(x >= 0.0)) throw std::domain_error("mgb_pdf requires x >= 0");
  if (x > params.beta1) return -kInf;
  const double ap = params.alpha * params.p;
  if (x == 0.0 && ap != 1.0) return ap > 1.0 ? -kInf : kInf;
  const auto pc = bounded_pieces(x, params);
  const double power_term =
      ap == 1.0 ? 0.0 : (ap - 1.0) * pc.t2 / params.alpha;
  const double edge_term =
      params.q == 1.0 ? 0.0 : (params.q - 1.0) * pc.ln_num;
  const double pq = params.p + params.q;
  return std::log(params.alpha) + std::log(pq) +
         (params.p + 1.0) * std::log1p(pc.rba) + power_term -
         (pq + 1.0) * pc.ln_den + edge_term - std::log(params.beta2) -
         log_beta(params.p, params.q) - std::log(params.q + pc.rba * pq);
}

double mgb_pdf(double x, const GBParams& params) {
  return std::exp(mgb_log_pdf(x, params));
}

namespace {

// Second term shared by the mGB CDF and CCDF at 0 < x < beta1.
double mgb_cross_term(const BoundedPieces& pc, const GBParams& params) {
  const double pq = params.p + params.q;
  const double ln_w = pc.ln_num - pc.ln_den;
  const double ln_z = std::log1p(pc.rba) + pc.t2 - pc.ln_den;
  const double ln_d =
      log_beta(params.p, params.q) + std::log(params.q + pc.rba * pq);
  return std::exp(params.q * ln_w + params.p * ln_z - ln_d);
}

}  // namespace

double mgb_cdf(double x, const GBParams& params) {
  params.validate();
  if (!(x >= 0.0) || x > params.beta1) {
    throw std::domain_error("mgb_cdf requires x in [0, beta1]");
  }
  if (x == 0.0) return 0.0;
  if (x == params.beta1) return 1.0;
  const auto pc = bounded_pieces(x, params);
  // y1 = (u1 + u2) / (1 + u2)
  const double hi = std::max(pc.t1, pc.t2);
  const double ln_u1pu2 = hi + std::log1p(std::exp(-std::fabs(pc.t1 - pc.t2)));
  const double y1 = std::min(1.0, std::exp(ln_u1pu2 - pc.ln_den));
  const double cdf =
      reg_inc_beta(y1, params.p, params.q) + mgb_cross_term(pc, params);
  return std::min(1.0, std::max(0.0, cdf));
}

double mgb_ccdf(double x, const GBParams& params) {
  params.validate();
  if (!(x >= 0.0) || x > params.beta1) {
    throw std::domain_error("mgb_ccdf requires x in [0, beta1]");
  }
  if (x == 0.0) return 1.0;
  if (x == params.beta1) return 0.0;
  const auto pc = bounded_pieces(x, params);
  const double w = std::min(1.0, std::exp(pc.ln_num - pc.ln_den));
  const double ccdf =
      reg_inc_beta(w, params.q, params.p) - mgb_cross_term(pc, params);
  return std::min(1.0, std::max(0.0, ccdf));
}

double gb2_log_pdf(double x, const GB2Params& params) {
  params.validate();
  if (!(x > 0.0)) throw std::domain_error("gb2_pdf requires x > 0");
  const double t2 = params.alpha * (std::log(x) - std::log(params.beta2));
  return std::log(params.alpha) + (params.alpha * params.p - 1.0) * t2 /
                                      params.alpha -
         (params.p + params.q) * log1pexp(t2) - std::log(params.beta2) -
         log_beta(params.p, params.q);
}

double gb2_pdf(double x, const GB2Params& params) {
  return std::exp(gb2_log_pdf(x, params));
}

double mgb2_log_pdf(double x, const GB2Params& params) {
  params.validate();
  if (!(x > 0.0)) throw std::domain_error("mgb2_pdf requires x > 0");
  const double t2 = params.alpha * (std::log(x) - std::log(params.beta2));
  const double pq = params.p + params.q;
  return std::log(params.alpha) + std::log(pq) - std::log(params.q) +
         (params.alpha * params.p - 1.0) * t2 / params.alpha -
         (pq + 1.0) * log1pexp(t2) - std::log(params.beta2) -
         log_beta(params.p, params.q);
}

double mgb2_pdf(double x, const GB2Params& params) {
  return std::exp(mgb2_log_pdf(x, params));
}

double gb2_cdf(double x, const GB2Params& params) {
  params.validate();
  if (!(x >= 0.0)) throw std::domain_error("gb2_cdf requires x >= 0");
  if (x == 0.0) return 0.0;
  const double t2 = params.alpha * (std::log(x) - std::log(params.beta2));
  const double z = std::exp(t2 - log1pexp(t2));  // u2 / (1 + u2)
  return reg_inc_beta(z, params.p, params.q);
}

double gb2_ccdf(double x, const GB2Params& params) {
  params.validate();
  if (!(x >= 0.0)) throw std::domain_error("gb2_ccdf requires x >= 0");
  if (x == 0.0) return 1.0;
  const double t2 = params.alpha * (std::log(x) - std::log(params.beta2));
  const double z = std::exp(-log1pexp(t2));  // 1 / (1 + u2)
  return reg_inc_beta(z, params.q, params.p);
}

double gb_ccdf_near_beta1(double x, const GBParams& params) {
  params.validate();
  if (x >= params.beta1) return 0.0;
  if (x <= 0.0) return 1.0;
  const auto pc = bounded_pieces(x, params);
  const double ln_w = pc.ln_num - pc.ln_den;
  return std::exp(params.q * ln_w - std::log(params.q) -
                  log_beta(params.p, params.q));
}

double mgb_ccdf_near_beta1(double x, const GBParams& params) {
  const double rba = std::exp(
      params.alpha * (std::log(params.beta2) - std::log(params.beta1)));
  return gb_ccdf_near_beta1(x, params) * (1.0 + params.p / params.q) * rba;
}

SortedSample sample_gb2(const GB2Params& params, std::int64_t n,
                        std::uint64_t seed) {
  params.validate();
  if (n < 1) throw std::domain_error("sample_gb2 requires n >= 1");
  std::mt19937_64 rng(seed);
  std::vector<double> draws(static_cast<std::size_t>(n));
  for (auto& x : draws) {
    const double u = uniform01(rng);
    double b = inv_reg_inc_beta(u, params.p, params.q);
    b = std::min(std::max(b, 1e-300), 1.0 - 1e-16);
    x = params.beta2 * std::exp((std::log(b) - std::log1p(-b)) / params.alpha);
  }
  return SortedSample::from_values(std::move(draws), "synthetic:gb2");
}

SortedSample sample_mgb(const GBParams& params, std::int64_t n,
                        std::uint64_t seed) {
  params.validate();
  if (n < 1) throw std::domain_error("sample_mgb requires n >= 1");
  std::mt19937_64 rng(seed);
  const double x_tol = 1e-10 * params.beta1;
  std::vector<double> draws(static_cast<std::size_t>(n));
  for (auto& draw : draws) {
    const double u = uniform01(rng);
    // Newton with a maintained bisection bracket on [0, beta1].
    double lo = 0.0;
    double hi = params.beta1;
    double x = 0.5 * params.beta1;
    for (int iter = 0; iter < 200; ++iter) {
      const double f = mgb_cdf(x, params) - u;
      if (std::fabs(f) <= 1e-12) break;
      if (f > 0.0) {
        hi = x;
      } else {
        lo = x;
      }
      if (hi - lo <= x_tol) break;
      const double pdf = mgb_pdf(x, params);
      double next = pdf > 0.0 && std::isfinite(pdf) ? x - f / pdf : lo;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      x = next;
    }
    draw = std::min(x, params.beta1);
  }
  return SortedSample::from_values(std::move(draws), "synthetic:mgb");
}

}  // namespace gbtail
