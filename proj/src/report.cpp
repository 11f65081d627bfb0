#include "gbtail/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "gbtail/ingest.hpp"
#include "json.hpp"

namespace gbtail {

namespace {

using ordered_json = nlohmann::ordered_json;

// Strict loading: every object must contain only known keys.
void check_keys(const ordered_json& j, const std::set<std::string>& allowed,
                const char* context) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw ParseError(std::string("unknown field '") + key + "' in " +
                       context);
    }
  }
}

ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

double number_from(const ordered_json& j, double fallback_for_null) {
  if (j.is_null()) return fallback_for_null;
  return j.get<double>();
}

ordered_json fit_to_json(const FitResult& fit) {
  ordered_json j;
  j["family"] = family_name(fit.family);
  ordered_json params;
  if (fit.family == Family::mGB) {
    const auto& pr = fit.mgb_params();
    params["alpha"] = pr.alpha;
    params["beta1"] = pr.beta1;
    params["beta2"] = pr.beta2;
    params["p"] = pr.p;
    params["q"] = pr.q;
  } else {
    const auto& pr = fit.gb2_params();
    params["alpha"] = pr.alpha;
    params["beta2"] = pr.beta2;
    params["p"] = pr.p;
    params["q"] = pr.q;
  }
  j["params"] = params;
  j["log_likelihood"] = number_or_null(fit.log_likelihood);
  j["ks_stat"] = fit.ks_stat;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["ccdf_slope"] = fit.ccdf_slope();
  j["warnings"] = fit.warnings;
  return j;
}

FitResult fit_from_json(const ordered_json& j) {
  check_keys(j,
             {"family", "params", "log_likelihood", "ks_stat", "converged",
              "iterations", "ccdf_slope", "warnings"},
             "fit");
  FitResult fit;
  const std::string family = j.at("family").get<std::string>();
  const auto& params = j.at("params");
  if (family == "mGB") {
    fit.family = Family::mGB;
    check_keys(params, {"alpha", "beta1", "beta2", "p", "q"}, "mGB params");
    fit.params = GBParams{params.at("alpha").get<double>(),
                          params.at("beta1").get<double>(),
                          params.at("beta2").get<double>(),
                          params.at("p").get<double>(),
                          params.at("q").get<double>()};
  } else if (family == "GB2") {
    fit.family = Family::GB2;
    check_keys(params, {"alpha", "beta2", "p", "q"}, "GB2 params");
    fit.params = GB2Params{params.at("alpha").get<double>(),
                           params.at("beta2").get<double>(),
                           params.at("p").get<double>(),
                           params.at("q").get<double>()};
  } else {
    throw ParseError("unknown family '" + family + "' in report");
  }
  fit.log_likelihood = number_from(j.at("log_likelihood"),
                                   -std::numeric_limits<double>::infinity());
  fit.ks_stat = j.at("ks_stat").get<double>();
  fit.converged = j.at("converged").get<bool>();
  fit.iterations = j.at("iterations").get<std::int64_t>();
  fit.warnings = j.at("warnings").get<std::vector<std::string>>();
  return fit;
}

ordered_json tail_fit_to_json(const TailFit& fit) {
  ordered_json j;
  ordered_json policy;
  if (const auto* manual = std::get_if<ManualExclude>(&fit.policy)) {
    policy["type"] = "manual_exclude";
    policy["n_points"] = manual->n_points;
  } else {
    policy["type"] = "fraction_of_max";
    policy["fraction"] = std::get<FractionOfMax>(fit.policy).fraction;
  }
  j["policy"] = policy;
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["slope_stderr"] = fit.slope_stderr;
  j["tail_start_rank"] = fit.tail_start_rank;
  j["excluded"] = fit.excluded;
  j["points_used"] = fit.points_used;
  j["x_start"] = fit.x_start;
  return j;
}

TailFit tail_fit_from_json(const ordered_json& j) {
  check_keys(j,
             {"policy", "slope", "intercept", "slope_stderr",
              "tail_start_rank", "excluded", "points_used", "x_start"},
             "tail_fit");
  TailFit fit;
  const auto& policy = j.at("policy");
  const std::string type = policy.at("type").get<std::string>();
  if (type == "manual_exclude") {
    check_keys(policy, {"type", "n_points"}, "tail policy");
    fit.policy = ManualExclude{policy.at("n_points").get<std::int64_t>()};
  } else if (type == "fraction_of_max") {
    check_keys(policy, {"type", "fraction"}, "tail policy");
    fit.policy = FractionOfMax{policy.at("fraction").get<double>()};
  } else {
    throw ParseError("unknown tail policy '" + type + "'");
  }
  fit.slope = j.at("slope").get<double>();
  fit.intercept = j.at("intercept").get<double>();
  fit.slope_stderr = j.at("slope_stderr").get<double>();
  fit.tail_start_rank = j.at("tail_start_rank").get<std::int64_t>();
  fit.excluded = j.at("excluded").get<std::vector<std::int64_t>>();
  fit.points_used = j.at("points_used").get<std::int64_t>();
  fit.x_start = j.at("x_start").get<double>();
  return fit;
}

ordered_json utest_to_json(const UTestSummary& summary) {
  ordered_json j;
  j["model"] = summary.model;
  j["tail_start_rank"] = summary.tail_start_rank;
  j["tail_end_window"] = summary.tail_end_window;
  j["thresholds"] = {{"low", summary.low}, {"high", summary.high}};
  j["counts"] = {{"dk", summary.n_dk},
                 {"ndk", summary.n_ndk},
                 {"pdk", summary.n_pdk}};
  ordered_json flagged = ordered_json::array();
  for (const auto& f : summary.flagged) {
    flagged.push_back({{"rank", f.rank},
                       {"x", f.x},
                       {"pvalue", f.pvalue},
                       {"flag", f.flag}});
  }
  j["flagged"] = flagged;
  j["plot_csv"] = summary.plot_csv;
  if (summary.model == "LF") {
    j["lf_slope"] = summary.lf_slope;
    j["lf_x_start"] = summary.lf_x_start;
  }
  return j;
}

UTestSummary utest_from_json(const ordered_json& j) {
  check_keys(j,
             {"model", "tail_start_rank", "tail_end_window", "thresholds",
              "counts", "flagged", "plot_csv", "lf_slope", "lf_x_start"},
             "utest");
  UTestSummary summary;
  summary.model = j.at("model").get<std::string>();
  summary.tail_start_rank = j.at("tail_start_rank").get<std::int64_t>();
  summary.tail_end_window = j.at("tail_end_window").get<std::int64_t>();
  check_keys(j.at("thresholds"), {"low", "high"}, "thresholds");
  summary.low = j.at("thresholds").at("low").get<double>();
  summary.high = j.at("thresholds").at("high").get<double>();
  check_keys(j.at("counts"), {"dk", "ndk", "pdk"}, "counts");
  summary.n_dk = j.at("counts").at("dk").get<std::int64_t>();
  summary.n_ndk = j.at("counts").at("ndk").get<std::int64_t>();
  summary.n_pdk = j.at("counts").at("pdk").get<std::int64_t>();
  for (const auto& f : j.at("flagged")) {
    check_keys(f, {"rank", "x", "pvalue", "flag"}, "flagged entry");
    summary.flagged.push_back({f.at("rank").get<std::int64_t>(),
                               f.at("x").get<double>(),
                               f.at("pvalue").get<double>(),
                               f.at("flag").get<std::string>()});
  }
  summary.plot_csv = j.at("plot_csv").get<std::string>();
  if (j.contains("lf_slope")) {
    summary.lf_slope = j.at("lf_slope").get<double>();
  }
  if (j.contains("lf_x_start")) {
    summary.lf_x_start = j.at("lf_x_start").get<double>();
  }
  return summary;
}

void write_csv_value(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

std::string report_to_json(const AnalysisReport& report) {
  ordered_json j;
  j["schema_version"] = report.schema_version;
  j["generator"] = report.generator;
  j["seed"] = report.seed;
  j["ci_level"] = report.ci_level;
  j["dataset"] = {{"label", report.dataset.label},
                  {"m", report.dataset.m},
                  {"source", report.dataset.source}};
  ordered_json fits = ordered_json::array();
  for (const auto& fit : report.fits) fits.push_back(fit_to_json(fit));
  j["fits"] = fits;
  ordered_json tails = ordered_json::array();
  for (const auto& fit : report.tail_fits) {
    tails.push_back(tail_fit_to_json(fit));
  }
  j["tail_fits"] = tails;
  ordered_json utests = ordered_json::array();
  for (const auto& summary : report.utests) {
    utests.push_back(utest_to_json(summary));
  }
  j["utests"] = utests;
  return j.dump(2) + "\n";
}

AnalysisReport report_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid report JSON: ") + e.what());
  }
  try {
    check_keys(j,
               {"schema_version", "generator", "seed", "ci_level", "dataset",
                "fits", "tail_fits", "utests"},
               "report");
    AnalysisReport report;
    report.schema_version = j.at("schema_version").get<int>();
    if (report.schema_version != kSchemaVersion) {
      throw ParseError("unsupported report schema_version " +
                       std::to_string(report.schema_version));
    }
    report.generator = j.at("generator").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.ci_level = j.at("ci_level").get<double>();
    const auto& ds = j.at("dataset");
    check_keys(ds, {"label", "m", "source"}, "dataset");
    report.dataset.label = ds.at("label").get<std::string>();
    report.dataset.m = ds.at("m").get<std::int64_t>();
    report.dataset.source = ds.at("source").get<std::string>();
    for (const auto& fit : j.at("fits")) {
      report.fits.push_back(fit_from_json(fit));
    }
    for (const auto& fit : j.at("tail_fits")) {
      report.tail_fits.push_back(tail_fit_from_json(fit));
    }
    for (const auto& summary : j.at("utests")) {
      report.utests.push_back(utest_from_json(summary));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

void save_report(const std::string& path, const AnalysisReport& report) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write report to " + path);
  out << report_to_json(report);
}

AnalysisReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open report " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return report_from_json(buffer.str());
}

AnalysisReport merge_reports(const std::vector<AnalysisReport>& fragments) {
  if (fragments.empty()) {
    throw ParseError("merge_reports requires at least one fragment");
  }
  AnalysisReport merged = fragments.front();
  for (std::size_t i = 1; i < fragments.size(); ++i) {
    const auto& frag = fragments[i];
    if (!(frag.dataset == merged.dataset)) {
      throw ParseError("conflicting dataset descriptors: '" +
                       merged.dataset.label + "' (m=" +
                       std::to_string(merged.dataset.m) + ") vs '" +
                       frag.dataset.label + "' (m=" +
                       std::to_string(frag.dataset.m) + ")");
    }
    merged.fits.insert(merged.fits.end(), frag.fits.begin(), frag.fits.end());
    merged.tail_fits.insert(merged.tail_fits.end(), frag.tail_fits.begin(),
                            frag.tail_fits.end());
    merged.utests.insert(merged.utests.end(), frag.utests.begin(),
                         frag.utests.end());
  }
  return merged;
}

TailPanel make_tail_panel(const CcdfCurve& full_curve,
                          const SortedSample& tested,
                          const UTestReport& utest,
                          const std::function<double(double)>& model_ccdf,
                          double ci_level, BandAround band_around) {
  const std::int64_t lo = utest.tail_region.first;
  const std::int64_t hi = utest.tail_region.second;
  const std::int64_t rows = hi - lo + 1;

  // step lookup of the empirical CCDF: curve point with the largest x <= v
  auto empirical_at = [&](double v) {
    Eigen::Index a = 0;
    Eigen::Index b = full_curve.x.size() - 1;
    while (a < b) {
      const Eigen::Index mid = (a + b + 1) / 2;
      if (full_curve.x[mid] <= v) {
        a = mid;
      } else {
        b = mid - 1;
      }
    }
    return full_curve.s[a];
  };

  TailPanel panel;
  panel.x = Eigen::ArrayXd(rows);
  panel.empirical_ccdf = Eigen::ArrayXd(rows);
  panel.model_ccdf = Eigen::ArrayXd(rows);
  panel.pvalues = Eigen::ArrayXd(rows);
  panel.classifications.resize(static_cast<std::size_t>(rows));
  for (std::int64_t r = lo; r <= hi; ++r) {
    const std::int64_t i = r - lo;
    panel.x[i] = tested.values()[r - 1];
    panel.empirical_ccdf[i] = empirical_at(panel.x[i]);
    panel.model_ccdf[i] = model_ccdf(panel.x[i]);
    panel.pvalues[i] = utest.pvalues[r - 1];
    panel.classifications[static_cast<std::size_t>(i)] =
        utest.classifications[static_cast<std::size_t>(r - 1)];
  }

  CcdfCurve band_points;
  band_points.x = panel.x;
  band_points.s = band_around == BandAround::Model ? panel.model_ccdf
                                                   : panel.empirical_ccdf;
  band_points.m = full_curve.m;
  const auto band = ci_band(band_points, full_curve.m, ci_level);
  panel.ci_lower = band.lower;
  panel.ci_upper = band.upper;
  return panel;
}

void write_tail_panel_csv(const std::string& path, const TailPanel& panel) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "x,empirical_ccdf,model_ccdf,ci_lower,ci_upper,pvalue,"
         "classification\n";
  for (Eigen::Index i = 0; i < panel.x.size(); ++i) {
    write_csv_value(out, panel.x[i]);
    out << ',';
    write_csv_value(out, panel.empirical_ccdf[i]);
    out << ',';
    write_csv_value(out, panel.model_ccdf[i]);
    out << ',';
    write_csv_value(out, panel.ci_lower[i]);
    out << ',';
    write_csv_value(out, panel.ci_upper[i]);
    out << ',';
    write_csv_value(out, panel.pvalues[i]);
    out << ','
        << flag_name(panel.classifications[static_cast<std::size_t>(i)])
        << '\n';
  }
}

void write_pdf_panel_csv(const std::string& path, const SortedSample& sample,
                         const std::vector<FitResult>& fits,
                         std::int64_t bins_per_decade) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "x_center,empirical_density";
  for (const auto& fit : fits) {
    out << ',' << family_name(fit.family) << "_pdf";
  }
  out << '\n';
  const auto hist = log_binned_pdf(sample, bins_per_decade);
  for (Eigen::Index j = 0; j < hist.center.size(); ++j) {
    write_csv_value(out, hist.center[j]);
    out << ',';
    write_csv_value(out, hist.density[j]);
    for (const auto& fit : fits) {
      out << ',';
      write_csv_value(out, fit.pdf()(hist.center[j]));
    }
    out << '\n';
  }
}

void write_ccdf_panel_csv(const std::string& path, const SortedSample& sample,
                          const std::vector<FitResult>& fits,
                          const std::vector<TailFit>& tail_fits) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "x,empirical_ccdf";
  for (const auto& fit : fits) {
    out << ',' << family_name(fit.family) << "_ccdf";
  }
  for (std::size_t i = 0; i < tail_fits.size(); ++i) {
    out << ",lf" << i + 1 << "_ccdf";
  }
  out << '\n';
  const auto curve = build_ccdf(sample);
  for (Eigen::Index j = 0; j < curve.x.size(); ++j) {
    const double x = curve.x[j];
    write_csv_value(out, x);
    out << ',';
    write_csv_value(out, curve.s[j]);
    for (const auto& fit : fits) {
      out << ',';
      write_csv_value(out, fit.ccdf()(x));
    }
    for (const auto& lf : tail_fits) {
      out << ',';
      const double line = std::exp(lf.intercept + lf.slope * std::log(x));
      write_csv_value(out, std::min(1.0, line));
    }
    out << '\n';
  }
}

void write_pvalue_panel_csv(const std::string& path,
                            const SortedSample& sample,
                            const std::vector<PvalueSeries>& series) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << "rank,x";
  for (const auto& s : series) {
    out << ",pvalue_" << s.model << ",classification_" << s.model;
  }
  out << '\n';
  const std::int64_t m = sample.m();
  for (std::int64_t rank = 1; rank <= m; ++rank) {
    bool any = false;
    for (const auto& s : series) {
      const std::int64_t idx = rank - s.first_rank;
      if (idx >= 0 && idx < static_cast<std::int64_t>(s.pvalues.size())) {
        any = true;
      }
    }
    if (!any) continue;
    out << rank << ',';
    write_csv_value(out, sample.values()[rank - 1]);
    for (const auto& s : series) {
      const std::int64_t idx = rank - s.first_rank;
      if (idx >= 0 && idx < static_cast<std::int64_t>(s.pvalues.size())) {
        out << ',';
        write_csv_value(out, s.pvalues[idx]);
        out << ','
            << flag_name(s.classifications[static_cast<std::size_t>(idx)]);
      } else {
        out << ",,";
      }
    }
    out << '\n';
  }
}

}  // namespace gbtail
