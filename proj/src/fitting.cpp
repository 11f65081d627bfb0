#include "gbtail/fitting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "gbtail/neldermead.hpp"
#include "gbtail/specfun.hpp"

namespace gbtail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogParamBound = 18.42;  // parameters confined to ~[1e-8, 1e8]
constexpr double kBeta1Floor = 1e-9;      // keeps beta1 strictly above max(x)

double softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::fabs(t)));
}

// Eigen expression for sum_i ln(1 + e^{t_i}), branch-free and overflow-safe.
double log1pexp_sum(const Eigen::ArrayXd& t) {
  return (t.max(0.0) + (-t.abs()).exp().log1p()).sum();
}

struct SampleStats {
  Eigen::ArrayXd lx;
  double sum_lx = 0.0;
  double n = 0.0;
  double lmax = 0.0;
  double median = 0.0;
};

SampleStats make_stats(const SortedSample& sample) {
  SampleStats st;
  st.lx = sample.values().log();
  st.sum_lx = st.lx.sum();
  st.n = static_cast<double>(sample.m());
  st.lmax = std::log(sample.max());
  st.median = sample.values()[sample.m() / 2];
  return st;
}

// Negative log-likelihood of GB2 at theta = (ln a, ln b2, ln p, ln q).
double gb2_nll(const Eigen::VectorXd& theta, const SampleStats& st,
               bool prior) {
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (std::fabs(theta[i]) > kLogParamBound) return kInf;
  }
  const double alpha = std::exp(theta[0]);
  const double lb2 = theta[1];
  const double p = std::exp(theta[2]);
  const double q = std::exp(theta[3]);
  const Eigen::ArrayXd t = alpha * (st.lx - lb2);
  const double ll = st.n * (theta[0] - lb2 - log_beta(p, q)) +
                    (alpha * p - 1.0) * (st.sum_lx - st.n * lb2) -
                    (p + q) * log1pexp_sum(t);
  if (!std::isfinite(ll)) return kInf;
  return -ll + (prior ? theta.sum() : 0.0);
}

// Negative log-likelihood of mGB at theta = (ln a, ln b2, ln p, ln q, t5)
// with beta1 = max(x) * (1 + kBeta1Floor + softplus(t5)). The floor keeps
// the q < 1 endpoint singularity out of reach of the optimizer, where the
// likelihood is unbounded.
double mgb_nll(const Eigen::VectorXd& theta, const SampleStats& st,
               bool prior) {
  for (Eigen::Index i = 0; i < 4; ++i) {
    if (std::fabs(theta[i]) > kLogParamBound) return kInf;
  }
  if (std::fabs(theta[4]) > 40.0) return kInf;
  const double alpha = std::exp(theta[0]);
  const double lb2 = theta[1];
  const double p = std::exp(theta[2]);
  const double q = std::exp(theta[3]);
  const double lb1 =
      st.lmax + std::log1p(kBeta1Floor + softplus(theta[4]));
  const double rba = std::exp(alpha * (lb2 - lb1));
  const double pq = p + q;

  const Eigen::ArrayXd t2 = alpha * (st.lx - lb2);
  const Eigen::ArrayXd t1 = alpha * (st.lx - lb1);
  const double sum_ln_edge = (-(t1.exp())).log1p().sum();
  if (!std::isfinite(sum_ln_edge)) return kInf;

  const double constant = theta[0] + std::log(pq) +
                          (p + 1.0) * std::log1p(rba) - lb2 -
                          log_beta(p, q) - std::log(q + rba * pq);
  const double ll = st.n * constant +
                    (alpha * p - 1.0) * (st.sum_lx - st.n * lb2) -
                    (pq + 1.0) * log1pexp_sum(t2) +
                    (q - 1.0) * sum_ln_edge;
  if (!std::isfinite(ll)) return kInf;
  return -ll + (prior ? theta.head<4>().sum() : 0.0);
}

Eigen::VectorXd make_start(int index, Family family, const SampleStats& st) {
  static const double alphas[4] = {0.5, 1.0, 2.0, 4.0};
  const int cycle = index % 8;
  const int extra = index / 8;
  double alpha = alphas[cycle % 4] * std::pow(1.4, extra);
  double beta2 = (cycle < 4 ? st.median : st.median / 4.0) /
                 std::pow(1.3, extra);
  const Eigen::Index dim = family == Family::mGB ? 5 : 4;
  Eigen::VectorXd theta(dim);
  theta[0] = std::log(alpha);
  theta[1] = std::log(beta2);
  theta[2] = 0.0;  // p = 1
  theta[3] = 0.0;  // q = 1
  if (family == Family::mGB) {
    // alternate beta1 starts at 1.1 and 2.0 times the sample maximum
    theta[4] = (index % 2 == 0) ? std::log(std::exp(0.1) - 1.0)
                                : std::log(std::exp(1.0) - 1.0);
  }
  return theta;
}

}  // namespace

std::string family_name(Family family) {
  return family == Family::mGB ? "mGB" : "GB2";
}

double FitResult::ccdf_slope() const {
  if (family == Family::GB2) {
    const auto& pr = gb2_params();
    return -pr.alpha * pr.q;
  }
  const auto& pr = mgb_params();
  return -pr.alpha * (pr.q + 1.0);
}

std::function<double(double)> FitResult::cdf() const {
  if (family == Family::GB2) {
    return [pr = gb2_params()](double x) { return gb2_cdf(x, pr); };
  }
  return [pr = mgb_params()](double x) {
    return x >= pr.beta1 ? 1.0 : mgb_cdf(x, pr);
  };
}

std::function<double(double)> FitResult::ccdf() const {
  if (family == Family::GB2) {
    return [pr = gb2_params()](double x) { return gb2_ccdf(x, pr); };
  }
  return [pr = mgb_params()](double x) {
    return x >= pr.beta1 ? 0.0 : mgb_ccdf(x, pr);
  };
}

std::function<double(double)> FitResult::pdf() const {
  if (family == Family::GB2) {
    return [pr = gb2_params()](double x) { return gb2_pdf(x, pr); };
  }
  return [pr = mgb_params()](double x) { return mgb_pdf(x, pr); };
}

FitResult fit_mle(const SortedSample& sample, Family family,
                  const FitConfig& config) {
  FitResult result;
  result.family = family;

  const auto st = make_stats(sample);
  if (sample.m() < 50) {
    result.warnings.push_back("sample has fewer than 50 values; estimates "
                              "may be unstable");
  }

  auto finalize_params = [&](const Eigen::VectorXd& theta) {
    if (family == Family::GB2) {
      result.params = GB2Params{std::exp(theta[0]), std::exp(theta[1]),
                                std::exp(theta[2]), std::exp(theta[3])};
    } else {
      const double beta1 =
          sample.max() * (1.0 + kBeta1Floor + softplus(theta[4]));
      result.params = GBParams{std::exp(theta[0]), beta1, std::exp(theta[1]),
                               std::exp(theta[2]), std::exp(theta[3])};
    }
  };

  if (sample.min() == sample.max()) {
    result.warnings.push_back(
        "degenerate sample: all values identical; no density maximizer");
    finalize_params(make_start(0, family, st));
    result.converged = false;
    result.log_likelihood = -kInf;
    return result;
  }

  auto objective = [&](const Eigen::VectorXd& theta) {
    return family == Family::GB2
               ? gb2_nll(theta, st, config.log_uniform_prior)
               : mgb_nll(theta, st, config.log_uniform_prior);
  };

  NelderMeadOptions nm;
  nm.ftol = config.ftol;
  nm.max_iter = config.max_iter;

  const int starts = std::max(1, config.starts);
  std::vector<NelderMeadResult> runs(static_cast<std::size_t>(starts));
  auto run_one = [&](int i) {
    const Eigen::VectorXd theta0 = make_start(i, family, st);
    const Eigen::VectorXd step =
        Eigen::VectorXd::Constant(theta0.size(), 0.4);
    runs[static_cast<std::size_t>(i)] = nelder_mead(objective, theta0, step, nm);
  };

  if (config.threads > 1) {
    std::vector<std::future<void>> futures;
    std::atomic<int> next{0};
    const int workers = std::min(config.threads, starts);
    for (int w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&]() {
        for (int i = next.fetch_add(1); i < starts; i = next.fetch_add(1)) {
          run_one(i);
        }
      }));
    }
    for (auto& f : futures) f.get();
  } else {
    for (int i = 0; i < starts; ++i) run_one(i);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].fmin < runs[best].fmin) best = i;
  }

  finalize_params(runs[best].x);
  result.converged = runs[best].converged;
  result.iterations = runs[best].iterations;
  // report the plain likelihood even when a prior steered the search
  result.log_likelihood = family == Family::GB2
                              ? -gb2_nll(runs[best].x, st, false)
                              : -mgb_nll(runs[best].x, st, false);
  result.ks_stat = ks_statistic(sample, result.cdf());
  return result;
}

double ks_statistic(const SortedSample& sample,
                    const std::function<double(double)>& cdf) {
  const auto& v = sample.values();
  const std::int64_t m = sample.m();
  const double md = static_cast<double>(m);
  double d = 0.0;
  std::int64_t i = 0;
  while (i < m) {
    std::int64_t j = i;
    while (j + 1 < m && v[j + 1] == v[i]) ++j;  // tie block [i..j]
    const double f = cdf(v[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / md));
    d = std::max(d, std::fabs(f - static_cast<double>(j + 1) / md));
    i = j + 1;
  }
  return d;
}

std::int64_t rank_at_quantile(const SortedSample& sample, double quantile) {
  if (!(quantile >= 0.0 && quantile <= 1.0)) {
    throw std::domain_error("quantile must lie in [0,1]");
  }
  const auto r = static_cast<std::int64_t>(
      std::floor(quantile * static_cast<double>(sample.m()))) + 1;
  return std::clamp<std::int64_t>(r, 1, sample.m());
}

TailFit tail_linear_fit(const CcdfCurve& curve, std::int64_t tail_start_rank,
                        const ExclusionPolicy& policy) {
  if (curve.m < 1 || curve.x.size() < 1) {
    throw FitError("tail_linear_fit: empty curve");
  }
  if (tail_start_rank < 1 || tail_start_rank > curve.m) {
    throw FitError("tail_linear_fit: tail_start_rank outside [1, m]");
  }

  const double md = static_cast<double>(curve.m);
  auto ascending_rank = [&](Eigen::Index j) {
    const auto count_ge =
        static_cast<std::int64_t>(std::llround(curve.s[j] * md));
    return curve.m - count_ge + 1;
  };

  std::vector<Eigen::Index> tail;
  for (Eigen::Index j = 0; j < curve.x.size(); ++j) {
    if (ascending_rank(j) >= tail_start_rank) tail.push_back(j);
  }

  std::vector<Eigen::Index> kept = tail;
  std::vector<Eigen::Index> dropped;
  if (const auto* manual = std::get_if<ManualExclude>(&policy)) {
    if (manual->n_points < 0) {
      throw FitError("tail_linear_fit: negative exclusion count");
    }
    const auto k = std::min<std::int64_t>(
        manual->n_points, static_cast<std::int64_t>(kept.size()));
    dropped.assign(kept.end() - k, kept.end());
    kept.erase(kept.end() - k, kept.end());
  } else {
    const auto& frac = std::get<FractionOfMax>(policy);
    if (!(frac.fraction > 0.0)) {
      throw FitError("tail_linear_fit: fraction must be positive");
    }
    const double cutoff = frac.fraction * curve.x[curve.x.size() - 1];
    kept.clear();
    for (Eigen::Index j : tail) {
      (curve.x[j] > cutoff ? dropped : kept).push_back(j);
    }
  }

  if (kept.size() < 5) {
    throw FitError("tail_linear_fit: fewer than 5 points remain after "
                   "exclusions");
  }

  const auto k = static_cast<Eigen::Index>(kept.size());
  Eigen::ArrayXd t(k);
  Eigen::ArrayXd y(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    t[i] = std::log(curve.x[kept[static_cast<std::size_t>(i)]]);
    y[i] = std::log(curve.s[kept[static_cast<std::size_t>(i)]]);
  }
  const double tb = t.mean();
  const double yb = y.mean();
  const Eigen::ArrayXd tc = t - tb;
  const Eigen::ArrayXd yc = y - yb;
  const double stt = (tc * tc).sum();
  if (stt <= 0.0) throw FitError("tail_linear_fit: degenerate abscissae");
  const double slope = (tc * yc).sum() / stt;
  const double intercept = yb - slope * tb;
  const Eigen::ArrayXd resid = yc - slope * tc;
  const double rss = (resid * resid).sum();
  const double dof = static_cast<double>(k - 2);
  const double stderr_slope =
      dof > 0.0 ? std::sqrt(rss / dof / stt) : 0.0;

  TailFit fit;
  fit.slope = slope;
  fit.intercept = intercept;
  fit.slope_stderr = stderr_slope;
  fit.policy = policy;
  fit.tail_start_rank = tail_start_rank;
  for (Eigen::Index j : dropped) {
    fit.excluded.push_back(ascending_rank(j));
  }
  fit.points_used = static_cast<std::int64_t>(kept.size());
  fit.x_start = curve.x[kept.front()];
  return fit;
}

}  // namespace gbtail
