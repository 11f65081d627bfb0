#include "gbtail/dragonking.hpp"
#include "gbtail/empirical.hpp"
#include "gbtail/fitting.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gbtail/distributions.hpp"
#include "oracles.hpp"
#include "table_params.hpp"

using namespace gbtail;

TEST_SUITE_BEGIN("dragonking");

TEST_CASE("u_test_pvalues closed forms") {
  // m = 1: Beta(1,1) is uniform, p = 1 - F(x)
  const auto one = SortedSample::from_values({10.0}, "one");
  const auto p1 = u_test_pvalues(one, [](double) { return 0.37; });
  CHECK(p1[0] == doctest::Approx(1.0 - 0.37).epsilon(1e-12));

  // k = m = 100 with F(x_m) = 0.99: p = 1 - 0.99^100
  std::vector<double> vals(100);
  for (int i = 0; i < 100; ++i) vals[static_cast<std::size_t>(i)] = i + 1.0;
  const auto sample = SortedSample::from_values(vals, "hundred");
  const auto ps = u_test_pvalues(
      sample, [](double x) { return std::min(0.99, x / 101.0); });
  CHECK(ps[99] == doctest::Approx(1.0 - std::pow(0.99, 100)).epsilon(1e-12));
  CHECK(ps[99] == doctest::Approx(0.63397).epsilon(1e-4));

  // B(u; m, 1) = u^m cross-checked by quadrature of the order-statistic
  // density m * t^(m-1)
  const double by_quadrature = oracle::integrate(
      [](double t) { return 100.0 * std::pow(t, 99.0); }, 0.0, 0.99, 1e-12);
  CHECK(1.0 - ps[99] == doctest::Approx(by_quadrature).epsilon(1e-9));
}

TEST_CASE("u_test_pvalues rejects an invalid cdf") {
  const auto sample = SortedSample::from_values({1.0, 2.0}, "bad");
  CHECK_THROWS_AS(u_test_pvalues(sample, [](double x) { return x; }),
                  std::domain_error);
}

TEST_CASE("p_k is nonincreasing in F(x_k)") {
  const auto sample = SortedSample::from_values({5.0}, "probe");
  double prev = 1.0;
  for (double f = 0.0; f <= 1.0; f += 0.05) {
    const auto p = u_test_pvalues(sample, [f](double) { return f; });
    CHECK(p[0] <= prev + 1e-15);
    prev = p[0];
  }
}

TEST_CASE("p-values are invariant under monotone transforms") {
  const auto params = anchors::gb2_hp();
  const auto sample = sample_gb2(params, 200, 31);
  const auto direct =
      u_test_pvalues(sample, [&](double x) { return gb2_cdf(x, params); });

  std::vector<double> shifted(sample.values().data(),
                              sample.values().data() + sample.m());
  for (auto& v : shifted) v = std::log1p(v);  // strictly increasing map
  const auto transformed = SortedSample::from_values(shifted, "log");
  const auto indirect = u_test_pvalues(transformed, [&](double y) {
    return gb2_cdf(std::expm1(y), params);
  });
  for (std::int64_t k = 0; k < sample.m(); ++k) {
    CHECK(indirect[k] == doctest::Approx(direct[k]).epsilon(1e-9));
  }
}

TEST_CASE("null calibration: p-values are uniform per rank") {
  const auto params = anchors::gb2_hpi_2019();
  const std::int64_t m = 50;
  const int reps = 2000;
  std::vector<double> at_max, at_median;
  at_max.reserve(reps);
  at_median.reserve(reps);
  int below_low = 0;
  for (int r = 0; r < reps; ++r) {
    const auto sample = sample_gb2(params, m, 100000 + r);
    const auto ps =
        u_test_pvalues(sample, [&](double x) { return gb2_cdf(x, params); });
    at_max.push_back(ps[m - 1]);
    at_median.push_back(ps[m / 2]);
    if (ps[m - 1] <= 0.05) ++below_low;
  }

  auto uniform_ks = [](std::vector<double> us) {
    std::sort(us.begin(), us.end());
    const double n = static_cast<double>(us.size());
    double d = 0.0;
    for (std::size_t i = 0; i < us.size(); ++i) {
      d = std::max(d, std::fabs(us[i] - (i + 1.0) / n));
      d = std::max(d, std::fabs(us[i] - static_cast<double>(i) / n));
    }
    return d;
  };
  const double crit = oracle::ks_critical(0.01) / std::sqrt(reps);
  CHECK(uniform_ks(at_max) < crit);
  CHECK(uniform_ks(at_median) < crit);

  // fraction below 0.05 within 3 sigma of 0.05
  const double frac = static_cast<double>(below_low) / reps;
  CHECK(std::fabs(frac - 0.05) <= 0.015);
}

TEST_CASE("classify thresholds, window, and regions") {
  Eigen::ArrayXd ps = Eigen::ArrayXd::Constant(100, 0.5);

  SUBCASE("all interior p-values produce no flags") {
    const auto report = classify(ps, {80, 100}, 5);
    CHECK(report.count(Flag::DK) == 0);
    CHECK(report.count(Flag::nDK) == 0);
    CHECK(report.count(Flag::pDK) == 0);
  }

  SUBCASE("p = 0.99 at the last rank inside any window is nDK") {
    ps[99] = 0.99;
    const auto report = classify(ps, {80, 100}, 1);
    CHECK(report.classifications[99] == Flag::nDK);
    CHECK(report.count(Flag::nDK) == 1);
  }

  SUBCASE("p = 0.01 mid-tail outside the window is pDK") {
    ps[84] = 0.01;  // rank 85
    const auto report = classify(ps, {80, 100}, 5);
    CHECK(report.classifications[84] == Flag::pDK);
    CHECK(report.count(Flag::DK) == 0);
  }

  SUBCASE("the same extreme inside the window is DK, not pDK") {
    ps[97] = 0.01;  // rank 98, window covers 96..100
    const auto report = classify(ps, {80, 100}, 5);
    CHECK(report.classifications[97] == Flag::DK);
  }

  SUBCASE("extremes outside the tail region stay unflagged") {
    ps[10] = 0.001;
    const auto report = classify(ps, {80, 100}, 5);
    CHECK(report.classifications[10] == Flag::None);
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(classify(ps, {90, 80}, 5), std::invalid_argument);
    CHECK_THROWS_AS(classify(ps, {0, 100}, 5), std::invalid_argument);
    CHECK_THROWS_AS(classify(ps, {80, 100}, 5, {0.5, 0.5}),
                    std::invalid_argument);
  }
}

TEST_CASE("default tail-end window") {
  CHECK(default_tail_end_window(100) == 5);
  CHECK(default_tail_end_window(116207) == 582);
  CHECK(default_tail_end_window(3) == 5);
}

TEST_CASE("lf_tail_cdf is a proper conditional tail CDF") {
  const auto cdf = lf_tail_cdf(-3.0, 10.0);
  CHECK(cdf(10.0) == 0.0);
  CHECK(cdf(5.0) == 0.0);
  CHECK(cdf(20.0) == doctest::Approx(1.0 - std::pow(2.0, -3.0)));
  double prev = 0.0;
  for (double x = 10.0; x < 1e5; x *= 2.0) {
    const double f = cdf(x);
    CHECK(f >= prev);
    CHECK(f <= 1.0);
    prev = f;
  }
  CHECK_THROWS_AS(lf_tail_cdf(0.5, 10.0), std::domain_error);
  CHECK_THROWS_AS(lf_tail_cdf(-3.0, 0.0), std::domain_error);
}

TEST_CASE("nDK appears when bounded-tail data is tested against its LF") {
  // mGB data has a finite upper endpoint: against the unbounded power law
  // implied by its own tail line, the top order statistics sit too low,
  // which is the negative-Dragon-King signature.
  const auto params = anchors::mgb_hpi_pooled();
  const auto sample = sample_mgb(params, 50000, 271828);

  const auto curve = build_ccdf(sample);
  const auto start = rank_at_quantile(sample, 0.9);
  const auto lf = tail_linear_fit(curve, start, FractionOfMax{0.9});
  REQUIRE(lf.slope < 0.0);

  // conditional subsample strictly above the renormalization point
  std::vector<double> tail_values;
  for (std::int64_t i = 0; i < sample.m(); ++i) {
    if (sample.values()[i] > lf.x_start) {
      tail_values.push_back(sample.values()[i]);
    }
  }
  const auto tail_sample = SortedSample::from_values(tail_values, "tail");
  const auto ps =
      u_test_pvalues(tail_sample, lf_tail_cdf(lf.slope, lf.x_start));
  const std::int64_t mt = tail_sample.m();
  const auto report = classify(ps, {1, mt}, default_tail_end_window(mt));
  CHECK(report.count(Flag::nDK) >= 1);
}

TEST_SUITE_END();
