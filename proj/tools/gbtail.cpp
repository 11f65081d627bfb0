// gbtail: fit Generalized-Beta-family distributions to heavy-tailed samples,
// fit log-log tail lines, compute binomial-inversion confidence bands, and
// flag Dragon-King / negative-Dragon-King outliers with the order-statistics
// U-test. Emits JSON reports and CSV plot bundles.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gbtail/distributions.hpp"
#include "gbtail/dragonking.hpp"
#include "gbtail/empirical.hpp"
#include "gbtail/fitting.hpp"
#include "gbtail/ingest.hpp"
#include "gbtail/report.hpp"
#include "gbtail/sample.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitConvergence = 4;
constexpr int kExitDomain = 5;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};


struct InputOptions {
  std::string path;
  std::string column;  // empty: one value per line
  std::string label;   // empty: file stem
};

gbtail::SortedSample load_input(const InputOptions& in) {
  const std::string label =
      in.label.empty() ? std::filesystem::path(in.path).stem().string()
                       : in.label;
  if (!in.column.empty()) {
    return gbtail::load_sample_column(in.path, gbtail::ColumnRef{in.column},
                                      label);
  }
  return gbtail::load_sample(in.path, label);
}

gbtail::DatasetDescriptor describe(const gbtail::SortedSample& sample,
                                   const std::string& source) {
  return gbtail::DatasetDescriptor{sample.label(), sample.m(), source};
}

gbtail::Family parse_family(const std::string& name) {
  if (name == "mgb" || name == "mGB") return gbtail::Family::mGB;
  if (name == "gb2" || name == "GB2") return gbtail::Family::GB2;
  throw UsageError("unknown family '" + name + "' (expected mgb or gb2)");
}

std::set<int> parse_years(const std::string& spec) {
  std::set<int> years;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string::npos) {
      years.insert(std::stoi(part));
    } else {
      const int a = std::stoi(part.substr(0, dash));
      const int b = std::stoi(part.substr(dash + 1));
      if (b < a) throw UsageError("bad year range '" + part + "'");
      for (int y = a; y <= b; ++y) years.insert(y);
    }
  }
  if (years.empty()) throw UsageError("empty year specification");
  return years;
}

void print_stats(const std::string& what, const gbtail::IngestStats& stats) {
  std::cerr << what << ": " << stats.accepted << " rows accepted, "
            << stats.skipped << " skipped of " << stats.total_rows << "\n";
  for (const auto& [reason, count] : stats.skip_reasons) {
    std::cerr << "  skipped " << count << ": " << reason << "\n";
  }
}

// ---------------------------------------------------------------- synth ---

struct SynthOptions {
  std::string family;
  double alpha = 0.0, beta1 = 0.0, beta2 = 0.0, p = 0.0, q = 0.0;
  std::int64_t n = 0;
  std::uint64_t seed = 42;
  std::string out;
};

int run_synth(const SynthOptions& opt) {
  const auto family = parse_family(opt.family);
  gbtail::SortedSample sample = [&] {
    if (family == gbtail::Family::mGB) {
      if (opt.beta1 <= 0.0) {
        throw UsageError("synth --family mgb requires --beta1");
      }
      const gbtail::GBParams params{opt.alpha, opt.beta1, opt.beta2, opt.p,
                                    opt.q};
      params.validate();
      return gbtail::sample_mgb(params, opt.n, opt.seed);
    }
    const gbtail::GB2Params params{opt.alpha, opt.beta2, opt.p, opt.q};
    params.validate();
    return gbtail::sample_gb2(params, opt.n, opt.seed);
  }();

  std::ostringstream header;
  header << "gbtail synth family=" << gbtail::family_name(family)
         << " alpha=" << opt.alpha;
  if (family == gbtail::Family::mGB) header << " beta1=" << opt.beta1;
  header << " beta2=" << opt.beta2 << " p=" << opt.p << " q=" << opt.q
         << " n=" << opt.n << " seed=" << opt.seed;
  gbtail::save_sample(opt.out, sample, {header.str()});
  std::cerr << "wrote " << sample.m() << " draws to " << opt.out << "\n";
  return 0;
}

// ------------------------------------------------------------------ fit ---

struct FitOptions {
  InputOptions input;
  std::vector<std::string> families{"mgb", "gb2"};
  gbtail::FitConfig config;
  std::uint64_t seed = 42;
  double ci_level = 0.95;
  std::string out;
};

int run_fit(const FitOptions& opt) {
  const auto sample = load_input(opt.input);
  gbtail::AnalysisReport report;
  report.seed = opt.seed;
  report.ci_level = opt.ci_level;
  report.dataset = describe(sample, opt.input.path);

  bool all_converged = true;
  for (const auto& name : opt.families) {
    const auto family = parse_family(name);
    auto fit = gbtail::fit_mle(sample, family, opt.config);
    for (const auto& warning : fit.warnings) {
      std::cerr << "warning (" << gbtail::family_name(family)
                << "): " << warning << "\n";
    }
    if (family == gbtail::Family::mGB &&
        !fit.mgb_params().power_law_regime()) {
      std::cerr << "warning (mGB): fitted beta2 >= beta1; the power-law "
                   "mid-range reading of the parameters does not apply\n";
    }
    if (!fit.converged) {
      all_converged = false;
      std::cerr << "fit for " << gbtail::family_name(family)
                << " did not converge after " << fit.iterations
                << " iterations\n";
    }
    report.fits.push_back(std::move(fit));
  }

  gbtail::save_report(opt.out, report);
  std::cerr << "wrote fit report to " << opt.out << "\n";
  return all_converged ? 0 : kExitConvergence;
}

// ----------------------------------------------------------------- tail ---

struct TailOptions {
  InputOptions input;
  double tail_start_quantile = 0.9;
  std::int64_t tail_start_rank = 0;  // 0: use the quantile
  std::int64_t exclude_top = -1;     // >=0: run LF-1
  double exclude_fraction = -1.0;    // >0: run LF-2 (default 0.9 if no policy)
  std::uint64_t seed = 42;
  double ci_level = 0.95;
  std::string out;
};

int run_tail(const TailOptions& opt) {
  const auto sample = load_input(opt.input);
  const auto curve = gbtail::build_ccdf(sample);
  const std::int64_t start =
      opt.tail_start_rank > 0
          ? opt.tail_start_rank
          : gbtail::rank_at_quantile(sample, opt.tail_start_quantile);

  std::vector<gbtail::ExclusionPolicy> policies;
  if (opt.exclude_top >= 0) {
    policies.push_back(gbtail::ManualExclude{opt.exclude_top});
  }
  if (opt.exclude_fraction > 0.0) {
    policies.push_back(gbtail::FractionOfMax{opt.exclude_fraction});
  }
  if (policies.empty()) {
    policies.push_back(gbtail::FractionOfMax{0.9});
  }

  gbtail::AnalysisReport report;
  report.seed = opt.seed;
  report.ci_level = opt.ci_level;
  report.dataset = describe(sample, opt.input.path);
  for (const auto& policy : policies) {
    auto fit = gbtail::tail_linear_fit(curve, start, policy);
    std::cerr << "tail fit: slope " << fit.slope << " (stderr "
              << fit.slope_stderr << "), " << fit.points_used
              << " points, " << fit.excluded.size() << " excluded\n";
    report.tail_fits.push_back(std::move(fit));
  }
  gbtail::save_report(opt.out, report);
  std::cerr << "wrote tail report to " << opt.out << "\n";
  return 0;
}

// ---------------------------------------------------------------- utest ---

struct UtestOptions {
  InputOptions input;
  std::string model;  // mgb | gb2 | lf
  std::string params_from;
  std::int64_t window = 0;  // 0: default_tail_end_window(m)
  double tail_start_quantile = 0.9;
  std::int64_t tail_start_rank = 0;
  double low = 0.05;
  double high = 0.95;
  double ci_level = 0.95;
  std::string band_around = "model";   // or "empirical"
  std::string lf_policy = "fraction";  // which tail fit to test
  std::string plot_csv;
  std::uint64_t seed = 42;
  std::string out;
};

gbtail::BandAround parse_band(const std::string& name) {
  if (name == "model") return gbtail::BandAround::Model;
  if (name == "empirical") return gbtail::BandAround::Empirical;
  throw UsageError("--band-around must be 'model' or 'empirical'");
}

const gbtail::FitResult* find_fit(const gbtail::AnalysisReport& report,
                                  gbtail::Family family) {
  for (const auto& fit : report.fits) {
    if (fit.family == family) return &fit;
  }
  return nullptr;
}

const gbtail::TailFit* find_tail_fit(const gbtail::AnalysisReport& report,
                                     const std::string& policy) {
  for (const auto& fit : report.tail_fits) {
    const bool manual = std::holds_alternative<gbtail::ManualExclude>(
        fit.policy);
    if (policy == "manual" && manual) return &fit;
    if (policy == "fraction" && !manual) return &fit;
  }
  return nullptr;
}

int run_utest(const UtestOptions& opt) {
  const auto sample = load_input(opt.input);
  const auto curve = gbtail::build_ccdf(sample);
  const std::int64_t m = sample.m();
  const std::int64_t window =
      opt.window > 0 ? opt.window : gbtail::default_tail_end_window(m);
  if (opt.window < 0 || window < 1) {
    throw UsageError("tail-end window must cover at least one rank");
  }
  const std::int64_t start =
      opt.tail_start_rank > 0
          ? opt.tail_start_rank
          : gbtail::rank_at_quantile(sample, opt.tail_start_quantile);

  const auto params_report = gbtail::load_report(opt.params_from);

  gbtail::AnalysisReport fragment;
  fragment.seed = opt.seed;
  fragment.ci_level = opt.ci_level;
  fragment.dataset = describe(sample, opt.input.path);

  gbtail::UTestSummary summary;
  summary.tail_start_rank = start;
  summary.tail_end_window = window;
  summary.low = opt.low;
  summary.high = opt.high;
  summary.plot_csv = opt.plot_csv;

  gbtail::UTestReport utest;
  const gbtail::SortedSample* tested = &sample;
  std::optional<gbtail::SortedSample> tail_subsample;
  std::function<double(double)> panel_ccdf;

  if (opt.model == "lf") {
    const auto* lf = find_tail_fit(params_report, opt.lf_policy);
    if (lf == nullptr) {
      throw UsageError("no tail fit with policy '" + opt.lf_policy +
                       "' in " + opt.params_from +
                       "; run 'gbtail tail' first");
    }
    // conditional tail: observations strictly above the renormalization
    // point, tested against the Pareto implied by the fitted slope
    std::vector<double> tail_values;
    for (std::int64_t i = 0; i < m; ++i) {
      if (sample.values()[i] > lf->x_start) {
        tail_values.push_back(sample.values()[i]);
      }
    }
    if (tail_values.size() < 5) {
      throw UsageError("fewer than 5 observations above the tail start");
    }
    tail_subsample = gbtail::SortedSample::from_values(
        tail_values, sample.label() + ":tail");
    tested = &*tail_subsample;
    const std::int64_t mt = tested->m();
    const std::int64_t w = std::min<std::int64_t>(window, mt);
    utest = gbtail::classify(
        gbtail::u_test_pvalues(*tested,
                               gbtail::lf_tail_cdf(lf->slope, lf->x_start)),
        {1, mt}, w, {opt.low, opt.high});
    summary.model = "LF";
    summary.lf_slope = lf->slope;
    summary.lf_x_start = lf->x_start;
    const double intercept = lf->intercept;
    const double slope = lf->slope;
    panel_ccdf = [intercept, slope](double x) {
      return std::min(1.0, std::exp(intercept + slope * std::log(x)));
    };
  } else {
    const auto family = parse_family(opt.model);
    const auto* fit = find_fit(params_report, family);
    if (fit == nullptr) {
      throw UsageError("no " + gbtail::family_name(family) + " fit in " +
                       opt.params_from + "; run 'gbtail fit' first");
    }
    utest = gbtail::classify(gbtail::u_test_pvalues(sample, fit->cdf()),
                             {start, m}, window, {opt.low, opt.high});
    summary.model = gbtail::family_name(family);
    panel_ccdf = fit->ccdf();
  }

  summary.n_dk = utest.count(gbtail::Flag::DK);
  summary.n_ndk = utest.count(gbtail::Flag::nDK);
  summary.n_pdk = utest.count(gbtail::Flag::pDK);
  for (std::int64_t r = 1; r <= tested->m(); ++r) {
    const auto flag = utest.classifications[static_cast<std::size_t>(r - 1)];
    if (flag == gbtail::Flag::None) continue;
    summary.flagged.push_back({r, tested->values()[r - 1],
                               utest.pvalues[r - 1],
                               gbtail::flag_name(flag)});
  }

  if (!opt.plot_csv.empty()) {
    const auto panel =
        gbtail::make_tail_panel(curve, *tested, utest, panel_ccdf,
                                opt.ci_level, parse_band(opt.band_around));
    gbtail::write_tail_panel_csv(opt.plot_csv, panel);
    std::cerr << "wrote plot data to " << opt.plot_csv << "\n";
  }

  std::cerr << "utest (" << summary.model << "): " << summary.n_dk
            << " DK, " << summary.n_ndk << " nDK, " << summary.n_pdk
            << " pDK\n";
  fragment.utests.push_back(std::move(summary));
  gbtail::save_report(opt.out, fragment);
  std::cerr << "wrote utest report to " << opt.out << "\n";
  return 0;
}

// --------------------------------------------------------------- report ---

struct ReportOptions {
  std::vector<std::string> fragments;
  InputOptions input;
  std::string out;
  std::string plot_dir;
  std::int64_t bins_per_decade = 10;
};

int run_report(const ReportOptions& opt) {
  std::vector<gbtail::AnalysisReport> fragments;
  fragments.reserve(opt.fragments.size());
  for (const auto& path : opt.fragments) {
    fragments.push_back(gbtail::load_report(path));
  }
  auto merged = gbtail::merge_reports(fragments);

  const auto sample = load_input(opt.input);
  if (sample.m() != merged.dataset.m) {
    throw gbtail::ParseError(
        "sample size " + std::to_string(sample.m()) +
        " does not match the fragments' dataset (m=" +
        std::to_string(merged.dataset.m) + ")");
  }

  if (!opt.plot_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(opt.plot_dir);
    const auto curve = gbtail::build_ccdf(sample);
    const auto dir = fs::path(opt.plot_dir);

    gbtail::write_pdf_panel_csv((dir / "pdf_panel.csv").string(), sample,
                                merged.fits, opt.bins_per_decade);
    gbtail::write_ccdf_panel_csv((dir / "ccdf_panel.csv").string(), sample,
                                 merged.fits, merged.tail_fits);

    // regenerate each U-test's per-rank series and tail panel
    std::vector<gbtail::PvalueSeries> series;
    for (auto& summary : merged.utests) {
      gbtail::UTestReport utest;
      const gbtail::SortedSample* tested = &sample;
      std::optional<gbtail::SortedSample> subsample;
      std::function<double(double)> panel_ccdf;
      std::int64_t first_rank = 1;

      if (summary.model == "LF") {
        std::vector<double> tail_values;
        std::int64_t before = 0;
        for (std::int64_t i = 0; i < sample.m(); ++i) {
          if (sample.values()[i] > summary.lf_x_start) {
            tail_values.push_back(sample.values()[i]);
          } else {
            ++before;
          }
        }
        if (tail_values.size() < 5) continue;
        subsample = gbtail::SortedSample::from_values(
            tail_values, sample.label() + ":tail");
        tested = &*subsample;
        first_rank = before + 1;
        const std::int64_t mt = tested->m();
        utest = gbtail::classify(
            gbtail::u_test_pvalues(
                *tested,
                gbtail::lf_tail_cdf(summary.lf_slope, summary.lf_x_start)),
            {1, mt}, std::min(summary.tail_end_window, mt),
            {summary.low, summary.high});
        const double slope = summary.lf_slope;
        double intercept = 0.0;
        for (const auto& lf : merged.tail_fits) {
          if (lf.slope == slope) intercept = lf.intercept;
        }
        panel_ccdf = [intercept, slope](double x) {
          return std::min(1.0, std::exp(intercept + slope * std::log(x)));
        };
      } else {
        const auto family = parse_family(summary.model);
        const auto* fit = find_fit(merged, family);
        if (fit == nullptr) continue;
        utest = gbtail::classify(gbtail::u_test_pvalues(sample, fit->cdf()),
                                 {summary.tail_start_rank, sample.m()},
                                 summary.tail_end_window,
                                 {summary.low, summary.high});
        panel_ccdf = fit->ccdf();
      }

      std::string name = summary.model;
      for (auto& c : name) c = static_cast<char>(std::tolower(c));
      const auto panel_path = (dir / ("tail_" + name + ".csv")).string();
      gbtail::write_tail_panel_csv(
          panel_path, gbtail::make_tail_panel(curve, *tested, utest,
                                              panel_ccdf, merged.ci_level));
      summary.plot_csv = panel_path;

      // the panel shows the tail region only, matching the tail CSVs
      gbtail::PvalueSeries s;
      s.model = summary.model;
      const std::int64_t lo = utest.tail_region.first;
      const std::int64_t len = utest.tail_region.second - lo + 1;
      s.first_rank = first_rank + lo - 1;
      s.pvalues = utest.pvalues.segment(lo - 1, len);
      s.classifications.assign(
          utest.classifications.begin() + (lo - 1),
          utest.classifications.begin() + (lo - 1 + len));
      series.push_back(std::move(s));
    }
    gbtail::write_pvalue_panel_csv((dir / "pvalue_panel.csv").string(),
                                   sample, series);
    std::cerr << "wrote plot bundle to " << opt.plot_dir << "\n";
  }

  gbtail::save_report(opt.out, merged);
  std::cerr << "wrote consolidated report to " << opt.out << "\n";
  return 0;
}

// ------------------------------------------------------------- ingest-* ---

struct IngestHpOptions {
  std::string input;
  std::string col_price = "price";
  std::string col_year = "year";
  std::string col_class;
  std::string class_filter;
  std::string deflator;
  int base_year = 0;
  int min_year = 1900;
  int max_year = 2100;
  std::string label = "hp";
  std::string out;
};

int run_ingest_hp(const IngestHpOptions& opt) {
  gbtail::PriceSchema schema;
  schema.price = gbtail::ColumnRef{opt.col_price};
  schema.year = gbtail::ColumnRef{opt.col_year};
  schema.min_year = opt.min_year;
  schema.max_year = opt.max_year;
  if (!opt.col_class.empty()) {
    schema.property_class = gbtail::ColumnRef{opt.col_class};
  }
  auto result = gbtail::read_prices(opt.input, schema);
  print_stats("prices", result.stats);

  std::vector<gbtail::PriceRecord> records;
  if (!opt.class_filter.empty()) {
    for (auto& rec : result.records) {
      if (rec.property_class == opt.class_filter) {
        records.push_back(std::move(rec));
      }
    }
    std::cerr << "class filter '" << opt.class_filter << "' kept "
              << records.size() << " records\n";
  } else {
    records = std::move(result.records);
  }
  if (records.empty()) {
    throw std::domain_error("no records left after filtering");
  }

  std::vector<std::string> header{"gbtail ingest-hp source=" + opt.input};
  gbtail::SortedSample sample = [&] {
    if (!opt.deflator.empty()) {
      if (opt.base_year == 0) {
        throw UsageError("--deflator requires --base-year");
      }
      const auto table = gbtail::read_deflator(opt.deflator, opt.base_year);
      header.push_back("deflated to constant dollars, base year " +
                       std::to_string(opt.base_year));
      return gbtail::deflate(records, table, opt.label);
    }
    header.push_back("nominal prices (no deflator supplied)");
    std::vector<double> values;
    values.reserve(records.size());
    for (const auto& rec : records) values.push_back(rec.price);
    return gbtail::SortedSample::from_values(std::move(values), opt.label);
  }();

  gbtail::save_sample(opt.out, sample, header);
  std::cerr << "wrote " << sample.m() << " values to " << opt.out << "\n";
  return 0;
}

struct IngestHpiOptions {
  std::string input;
  std::string col_zip = "#0";
  std::string col_year = "#1";
  std::string col_hpi = "#3";
  std::string years;
  std::string label = "hpi";
  std::string out;
};

int run_ingest_hpi(const IngestHpiOptions& opt) {
  gbtail::HpiSchema schema;
  schema.zip = gbtail::ColumnRef{opt.col_zip};
  schema.year = gbtail::ColumnRef{opt.col_year};
  schema.hpi = gbtail::ColumnRef{opt.col_hpi};
  const auto result = gbtail::read_hpi(opt.input, schema);
  print_stats("hpi", result.stats);

  const auto years = parse_years(opt.years);
  const auto sample = gbtail::select_hpi(result.records, years, opt.label);
  gbtail::save_sample(opt.out, sample,
                      {"gbtail ingest-hpi source=" + opt.input,
                       "years=" + opt.years});
  std::cerr << "wrote " << sample.m() << " values to " << opt.out << "\n";
  return 0;
}

void add_input_options(CLI::App* cmd, InputOptions& input) {
  cmd->add_option("--input", input.path, "sample file")->required();
  cmd->add_option("--column", input.column,
                  "column of a delimited file (name or #index); default: "
                  "one value per line");
  cmd->add_option("--label", input.label, "dataset label for the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Generalized-Beta tail analysis: full-distribution fits (mGB, GB2), "
      "log-log tail fits, binomial-inversion confidence bands, and the "
      "order-statistics U-test for Dragon-King outliers"};
  app.set_config("--config", "", "read options from an INI file (command "
                                 "line wins on conflict)");
  app.require_subcommand(1);

  SynthOptions synth;
  auto* synth_cmd =
      app.add_subcommand("synth", "draw a synthetic sample from GB2 or mGB");
  synth_cmd->add_option("--family", synth.family, "gb2 or mgb")->required();
  synth_cmd->add_option("--alpha", synth.alpha)->required();
  synth_cmd->add_option("--beta1", synth.beta1, "upper endpoint (mgb only)");
  synth_cmd->add_option("--beta2", synth.beta2)->required();
  synth_cmd->add_option("--p", synth.p)->required();
  synth_cmd->add_option("--q", synth.q)->required();
  synth_cmd->add_option("--n", synth.n)->required()->check(
      CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth.seed, "RNG seed (default 42)");
  synth_cmd->add_option("--out", synth.out)->required();

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand(
      "fit", "maximum-likelihood mGB / GB2 fits of a sample");
  add_input_options(fit_cmd, fit.input);
  fit_cmd->add_option("--family", fit.families,
                      "families to fit (default: mgb gb2)");
  fit_cmd->add_option("--starts", fit.config.starts, "multi-start count");
  fit_cmd->add_option("--max-iter", fit.config.max_iter);
  fit_cmd->add_option("--tol", fit.config.ftol,
                      "simplex log-likelihood tolerance");
  fit_cmd->add_option("--threads", fit.config.threads);
  fit_cmd->add_flag("--prior", fit.config.log_uniform_prior,
                    "maximize with log-uniform priors instead of plain ML");
  fit_cmd->add_option("--seed", fit.seed);
  fit_cmd->add_option("--ci-level", fit.ci_level);
  fit_cmd->add_option("--out", fit.out)->required();

  TailOptions tail;
  auto* tail_cmd =
      app.add_subcommand("tail", "log-log linear fit of the CCDF tail");
  add_input_options(tail_cmd, tail.input);
  tail_cmd->add_option("--tail-start-quantile", tail.tail_start_quantile,
                       "tail begins at this quantile (default 0.9)");
  tail_cmd->add_option("--tail-start-rank", tail.tail_start_rank,
                       "explicit 1-based ascending rank (overrides quantile)");
  tail_cmd->add_option("--exclude-top", tail.exclude_top,
                       "LF-1: exclude the n largest points");
  tail_cmd->add_option("--exclude-above-fraction", tail.exclude_fraction,
                       "LF-2: exclude points above fraction*max (default "
                       "0.9 when no policy is given)");
  tail_cmd->add_option("--seed", tail.seed);
  tail_cmd->add_option("--ci-level", tail.ci_level);
  tail_cmd->add_option("--out", tail.out)->required();

  UtestOptions utest;
  auto* utest_cmd = app.add_subcommand(
      "utest", "order-statistics U-test against a fitted model or LF");
  add_input_options(utest_cmd, utest.input);
  utest_cmd->add_option("--model", utest.model, "mgb, gb2, or lf")
      ->required();
  utest_cmd->add_option("--params-from", utest.params_from,
                        "report with the fitted model / tail fit")
      ->required();
  utest_cmd->add_option("--window", utest.window,
                        "tail-end window size (default max(5, 0.5% of m))")
      ->check(CLI::PositiveNumber);
  utest_cmd->add_option("--tail-start-quantile", utest.tail_start_quantile);
  utest_cmd->add_option("--tail-start-rank", utest.tail_start_rank);
  utest_cmd->add_option("--low", utest.low, "DK threshold (default 0.05)");
  utest_cmd->add_option("--high", utest.high, "nDK threshold (default 0.95)");
  utest_cmd->add_option("--ci-level", utest.ci_level);
  utest_cmd->add_option("--band-around", utest.band_around,
                        "draw the CI band around the model (default) or "
                        "the empirical CCDF");
  utest_cmd->add_option("--lf-policy", utest.lf_policy,
                        "which tail fit to test: fraction or manual");
  utest_cmd->add_option("--plot-csv", utest.plot_csv,
                        "write the per-rank tail panel here");
  utest_cmd->add_option("--seed", utest.seed);
  utest_cmd->add_option("--out", utest.out)->required();

  ReportOptions report;
  auto* report_cmd = app.add_subcommand(
      "report", "merge fragments and emit the plot-data bundle");
  report_cmd->add_option("--fragments", report.fragments)->required();
  add_input_options(report_cmd, report.input);
  report_cmd->add_option("--out", report.out)->required();
  report_cmd->add_option("--plot-dir", report.plot_dir,
                         "directory for the CSV plot bundle");
  report_cmd->add_option("--bins-per-decade", report.bins_per_decade);

  IngestHpOptions hp;
  auto* hp_cmd = app.add_subcommand(
      "ingest-hp", "read house prices, deflate, and write a sample file");
  hp_cmd->add_option("--input", hp.input)->required();
  hp_cmd->add_option("--col-price", hp.col_price);
  hp_cmd->add_option("--col-year", hp.col_year);
  hp_cmd->add_option("--col-class", hp.col_class);
  hp_cmd->add_option("--class-filter", hp.class_filter,
                     "keep only records whose class equals this value");
  hp_cmd->add_option("--deflator", hp.deflator, "year,factor file");
  hp_cmd->add_option("--base-year", hp.base_year);
  hp_cmd->add_option("--min-year", hp.min_year);
  hp_cmd->add_option("--max-year", hp.max_year);
  hp_cmd->add_option("--out-label", hp.label);
  hp_cmd->add_option("--out", hp.out)->required();

  IngestHpiOptions hpi;
  auto* hpi_cmd = app.add_subcommand(
      "ingest-hpi", "read FHFA ZIP5 annual HPI and write a pooled sample");
  hpi_cmd->add_option("--input", hpi.input)->required();
  hpi_cmd->add_option("--col-zip", hpi.col_zip);
  hpi_cmd->add_option("--col-year", hpi.col_year);
  hpi_cmd->add_option("--col-hpi", hpi.col_hpi);
  hpi_cmd->add_option("--years", hpi.years,
                      "e.g. 2019 or 2000-2022 or 2000-2005,2019")
      ->required();
  hpi_cmd->add_option("--out-label", hpi.label);
  hpi_cmd->add_option("--out", hpi.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(synth_cmd)) return run_synth(synth);
    if (app.got_subcommand(fit_cmd)) return run_fit(fit);
    if (app.got_subcommand(tail_cmd)) return run_tail(tail);
    if (app.got_subcommand(utest_cmd)) return run_utest(utest);
    if (app.got_subcommand(report_cmd)) return run_report(report);
    if (app.got_subcommand(hp_cmd)) return run_ingest_hp(hp);
    if (app.got_subcommand(hpi_cmd)) return run_ingest_hpi(hpi);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gbtail::FitError& e) {
    std::cerr << "fit error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const gbtail::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
