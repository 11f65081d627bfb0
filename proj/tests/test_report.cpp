#include "gbtail/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "gbtail/distributions.hpp"
#include "gbtail/ingest.hpp"
#include "table_params.hpp"

using namespace gbtail;

namespace {

AnalysisReport sample_report() {
  AnalysisReport report;
  report.seed = 7;
  report.ci_level = 0.95;
  report.dataset = {"unit", 100, "synthetic"};

  FitResult fit;
  fit.family = Family::GB2;
  fit.params = anchors::gb2_hp();
  fit.log_likelihood = -1234.5;
  fit.ks_stat = 0.012;
  fit.converged = true;
  fit.iterations = 321;
  report.fits.push_back(fit);

  TailFit tail;
  tail.slope = -3.1;
  tail.intercept = 5.5;
  tail.slope_stderr = 0.07;
  tail.policy = FractionOfMax{0.9};
  tail.tail_start_rank = 90;
  tail.excluded = {99, 100};
  tail.points_used = 9;
  tail.x_start = 250.0;
  report.tail_fits.push_back(tail);

  UTestSummary utest;
  utest.model = "GB2";
  utest.tail_start_rank = 90;
  utest.tail_end_window = 5;
  utest.n_ndk = 1;
  utest.flagged.push_back({100, 999.0, 0.97, "nDK"});
  report.utests.push_back(utest);
  return report;
}

}  // namespace

TEST_SUITE_BEGIN("report");

TEST_CASE("JSON round trip preserves everything") {
  const auto report = sample_report();
  const auto text = report_to_json(report);
  const auto back = report_from_json(text);

  CHECK(back.schema_version == kSchemaVersion);
  CHECK(back.seed == 7);
  CHECK(back.dataset == report.dataset);
  REQUIRE(back.fits.size() == 1);
  CHECK(back.fits[0].family == Family::GB2);
  CHECK(back.fits[0].gb2_params().alpha == anchors::gb2_hp().alpha);
  CHECK(back.fits[0].log_likelihood == -1234.5);
  CHECK(back.fits[0].iterations == 321);
  REQUIRE(back.tail_fits.size() == 1);
  CHECK(back.tail_fits[0].slope == -3.1);
  CHECK(std::get<FractionOfMax>(back.tail_fits[0].policy).fraction == 0.9);
  CHECK(back.tail_fits[0].excluded == std::vector<std::int64_t>{99, 100});
  REQUIRE(back.utests.size() == 1);
  CHECK(back.utests[0].model == "GB2");
  CHECK(back.utests[0].flagged.size() == 1);
  CHECK(back.utests[0].flagged[0].flag == "nDK");

  // serialization is stable
  CHECK(report_to_json(back) == text);
}

TEST_CASE("mGB params and non-finite likelihood survive the round trip") {
  AnalysisReport report;
  report.dataset = {"d", 10, "s"};
  FitResult fit;
  fit.family = Family::mGB;
  fit.params = anchors::mgb_hp();
  fit.log_likelihood = -std::numeric_limits<double>::infinity();
  fit.converged = false;
  report.fits.push_back(fit);

  const auto back = report_from_json(report_to_json(report));
  CHECK(back.fits[0].mgb_params().beta1 == anchors::mgb_hp().beta1);
  CHECK(back.fits[0].log_likelihood ==
        -std::numeric_limits<double>::infinity());
  CHECK_FALSE(back.fits[0].converged);
}

TEST_CASE("unknown fields are rejected") {
  auto text = report_to_json(sample_report());
  text.insert(text.find("\"seed\""), "\"surprise\": 1,\n  ");
  CHECK_THROWS_AS(report_from_json(text), ParseError);

  CHECK_THROWS_AS(report_from_json("{\"schema_version\": 99}"), ParseError);
  CHECK_THROWS_AS(report_from_json("not json"), ParseError);
}

TEST_CASE("merge_reports concatenates and rejects conflicts") {
  auto a = sample_report();
  auto b = sample_report();
  b.fits.clear();
  b.utests.clear();

  const auto merged = merge_reports({a, b});
  CHECK(merged.fits.size() == 1);
  CHECK(merged.tail_fits.size() == 2);
  CHECK(merged.utests.size() == 1);

  b.dataset.m = 17;
  CHECK_THROWS_AS(merge_reports({a, b}), ParseError);
  CHECK_THROWS_AS(merge_reports({}), ParseError);
}

TEST_CASE("tail panel rows align with ranks and band brackets the model") {
  const auto params = anchors::gb2_hpi_2019();
  const auto sample = sample_gb2(params, 2000, 99);
  const auto curve = build_ccdf(sample);
  auto ccdf = [&](double x) { return gb2_ccdf(x, params); };

  const auto pvalues = u_test_pvalues(sample, [&](double x) {
    return gb2_cdf(x, params);
  });
  const auto utest = classify(pvalues, {1801, 2000}, 10);
  const auto panel = make_tail_panel(curve, sample, utest, ccdf, 0.95);

  REQUIRE(panel.x.size() == 200);
  CHECK(panel.x[0] == sample.values()[1800]);
  CHECK(panel.pvalues[0] == pvalues[1800]);
  for (Eigen::Index i = 0; i < panel.x.size(); ++i) {
    CHECK(panel.ci_lower[i] <= panel.model_ccdf[i]);
    CHECK(panel.ci_upper[i] >= panel.model_ccdf[i]);
    CHECK(panel.empirical_ccdf[i] > 0.0);
  }

  const auto path =
      (std::filesystem::temp_directory_path() / "gbtail_panel.csv").string();
  write_tail_panel_csv(path, panel);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "x,empirical_ccdf,model_ccdf,ci_lower,ci_upper,pvalue,"
        "classification");
  std::int64_t rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 200);
  std::remove(path.c_str());
}

TEST_SUITE_END();
