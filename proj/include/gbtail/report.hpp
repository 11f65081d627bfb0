#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gbtail/dragonking.hpp"
#include "gbtail/empirical.hpp"
#include "gbtail/fitting.hpp"
#include "gbtail/sample.hpp"

namespace gbtail {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct DatasetDescriptor {
  std::string label;
  std::int64_t m = 0;
  std::string source;

  bool operator==(const DatasetDescriptor&) const = default;
};

/// Compact U-test record for the JSON report; the per-rank series lives in
/// the plot CSV referenced by plot_csv.
struct UTestSummary {
  std::string model;  // "mGB", "GB2", or "LF"
  std::int64_t tail_start_rank = 1;
  std::int64_t tail_end_window = 0;
  double low = 0.05;
  double high = 0.95;
  std::int64_t n_dk = 0;
  std::int64_t n_ndk = 0;
  std::int64_t n_pdk = 0;

  struct Flagged {
    std::int64_t rank = 0;
    double x = 0.0;
    double pvalue = 0.0;
    std::string flag;
  };
  std::vector<Flagged> flagged;
  std::string plot_csv;

  // LF binding (only meaningful when model == "LF"): the tested conditional
  // tail CDF is 1 - (x/lf_x_start)^lf_slope above lf_x_start.
  double lf_slope = 0.0;
  double lf_x_start = 0.0;
};

/// One run's results: fully reconstructs the run given the same inputs and
/// seed. Serialized as versioned JSON; unknown fields are rejected on read.
struct AnalysisReport {
  int schema_version = kSchemaVersion;
  std::string generator = std::string("gbtail ") + kToolVersion;
  std::uint64_t seed = 42;
  double ci_level = 0.95;
  DatasetDescriptor dataset;
  std::vector<FitResult> fits;
  std::vector<TailFit> tail_fits;
  std::vector<UTestSummary> utests;
};

std::string report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const std::string& text);
void save_report(const std::string& path, const AnalysisReport& report);
AnalysisReport load_report(const std::string& path);

/// Merge fragments produced by separate commands over the same dataset.
/// Conflicting dataset descriptors are a ParseError.
AnalysisReport merge_reports(const std::vector<AnalysisReport>& fragments);

/// Per-rank U-test panel rows: x, empirical_ccdf, model_ccdf, ci_lower,
/// ci_upper, pvalue, classification, one row per rank in the tail region.
struct TailPanel {
  Eigen::ArrayXd x;
  Eigen::ArrayXd empirical_ccdf;
  Eigen::ArrayXd model_ccdf;
  Eigen::ArrayXd ci_lower;
  Eigen::ArrayXd ci_upper;
  Eigen::ArrayXd pvalues;
  std::vector<Flag> classifications;
};

/// Which curve the binomial band is drawn around.
enum class BandAround { Model, Empirical };

/// Assemble the panel for the sample the U-test ran on (the full sample for
/// mGB/GB2, the conditional tail subsample for LF). `full_curve` supplies
/// the empirical CCDF overlay and the binomial-band sample size.
TailPanel make_tail_panel(const CcdfCurve& full_curve,
                          const SortedSample& tested,
                          const UTestReport& utest,
                          const std::function<double(double)>& model_ccdf,
                          double ci_level,
                          BandAround band_around = BandAround::Model);

void write_tail_panel_csv(const std::string& path, const TailPanel& panel);

/// Log-binned empirical density next to the fitted densities.
void write_pdf_panel_csv(const std::string& path, const SortedSample& sample,
                         const std::vector<FitResult>& fits,
                         std::int64_t bins_per_decade);

/// Empirical CCDF next to fitted model CCDFs and tail-fit lines.
void write_ccdf_panel_csv(const std::string& path, const SortedSample& sample,
                          const std::vector<FitResult>& fits,
                          const std::vector<TailFit>& tail_fits);

/// Per-rank p-values for every tested model, Fig.-3 style.
struct PvalueSeries {
  std::string model;
  Eigen::ArrayXd pvalues;              // aligned with sample ranks 1..m or a
  std::int64_t first_rank = 1;         // tail subsample starting here
  std::vector<Flag> classifications;
};
void write_pvalue_panel_csv(const std::string& path,
                            const SortedSample& sample,
                            const std::vector<PvalueSeries>& series);

}  // namespace gbtail
