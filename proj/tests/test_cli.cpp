// End-to-end checks of the command-line tool: every subcommand runs against
// real files in a scratch directory, exit codes follow the documented map,
// and reruns are byte-identical.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gbtail/empirical.hpp"
#include "gbtail/ingest.hpp"
#include "gbtail/report.hpp"

#ifndef GBTAIL_CLI_PATH
#error "GBTAIL_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / "gbtail_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const {
    return (dir / name).string();
  }
};

int run(const std::string& args) {
  const std::string cmd =
      std::string(GBTAIL_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("pipeline: synth, fit, tail, utest, report") {
  Scratch tmp;
  const auto sample_path = tmp / "sample.txt";

  REQUIRE(run("synth --family gb2 --alpha 1.6 --beta2 58 --p 5 --q 3 "
              "--n 5000 --seed 42 --out " +
              sample_path) == 0);

  // deterministic synthesis
  REQUIRE(run("synth --family gb2 --alpha 1.6 --beta2 58 --p 5 --q 3 "
              "--n 5000 --seed 42 --out " +
              (tmp / "sample_again.txt")) == 0);
  CHECK(slurp(sample_path) == slurp(tmp / "sample_again.txt"));

  REQUIRE(run("fit --input " + sample_path +
              " --family gb2 --starts 4 --threads 2 --max-iter 2000 --out " +
              (tmp / "fit.json")) == 0);
  REQUIRE(run("fit --input " + sample_path +
              " --family gb2 --starts 4 --threads 2 --max-iter 2000 --out " +
              (tmp / "fit_rerun.json")) == 0);
  CHECK(slurp(tmp / "fit.json") == slurp(tmp / "fit_rerun.json"));
  REQUIRE(run("tail --input " + sample_path + " --exclude-top 5 "
              "--exclude-above-fraction 0.9 --out " +
              (tmp / "tail.json")) == 0);
  REQUIRE(run("utest --input " + sample_path +
              " --model gb2 --params-from " + (tmp / "fit.json") +
              " --plot-csv " + (tmp / "panel.csv") + " --out " +
              (tmp / "utest_gb2.json")) == 0);
  REQUIRE(run("utest --input " + sample_path +
              " --model lf --params-from " + (tmp / "tail.json") +
              " --out " + (tmp / "utest_lf.json")) == 0);
  REQUIRE(run("report --fragments " + (tmp / "fit.json") + " " +
              (tmp / "tail.json") + " " + (tmp / "utest_gb2.json") + " " +
              (tmp / "utest_lf.json") + " --input " + sample_path +
              " --out " + (tmp / "final.json") + " --plot-dir " +
              (tmp / "plots")) == 0);

  const auto merged = gbtail::load_report(tmp / "final.json");
  CHECK(merged.fits.size() == 1);
  CHECK(merged.tail_fits.size() == 2);
  CHECK(merged.utests.size() == 2);
  CHECK(merged.dataset.m == 5000);
  CHECK(fs::exists(tmp / "plots/pdf_panel.csv"));
  CHECK(fs::exists(tmp / "plots/ccdf_panel.csv"));
  CHECK(fs::exists(tmp / "plots/pvalue_panel.csv"));
  CHECK(fs::exists(tmp / "plots/tail_gb2.csv"));
  CHECK(fs::exists(tmp / "plots/tail_lf.csv"));

  // the ccdf panel's empirical column is exactly build_ccdf's output
  const auto sample = gbtail::load_sample(sample_path, "s");
  const auto curve = gbtail::build_ccdf(sample);
  std::ifstream panel(tmp / "plots/ccdf_panel.csv");
  std::string line;
  std::getline(panel, line);  // header
  Eigen::Index row = 0;
  while (std::getline(panel, line) && row < curve.x.size()) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    CHECK(std::stod(line.substr(0, c1)) == curve.x[row]);
    CHECK(std::stod(line.substr(c1 + 1, c2 - c1 - 1)) == curve.s[row]);
    ++row;
  }
  CHECK(row == curve.x.size());

  // rerun of the whole report is byte-identical
  REQUIRE(run("report --fragments " + (tmp / "fit.json") + " " +
              (tmp / "tail.json") + " " + (tmp / "utest_gb2.json") + " " +
              (tmp / "utest_lf.json") + " --input " + sample_path +
              " --out " + (tmp / "final_rerun.json") + " --plot-dir " +
              (tmp / "plots")) == 0);
  CHECK(slurp(tmp / "final.json") == slurp(tmp / "final_rerun.json"));
}

TEST_CASE("exit codes distinguish usage, parse, and domain errors") {
  Scratch tmp;
  CHECK(run("frobnicate") == 2);                       // unknown subcommand
  CHECK(run("synth --family gb2 --alpha 1.6") == 2);   // missing flags

  // domain: invalid parameter values
  CHECK(run("synth --family gb2 --alpha -1 --beta2 58 --p 5 --q 3 --n 10 "
            "--out " +
            (tmp / "x.txt")) == 5);

  // parse: a sample file that is not numbers
  {
    std::ofstream bad(tmp / "bad.txt");
    bad << "hello\nworld\n";
  }
  CHECK(run("fit --input " + (tmp / "bad.txt") + " --family gb2 --out " +
            (tmp / "f.json")) == 3);

  // usage: asking for a model the params file does not hold
  REQUIRE(run("synth --family gb2 --alpha 1.6 --beta2 58 --p 5 --q 3 "
              "--n 2000 --seed 1 --out " +
              (tmp / "s.txt")) == 0);
  REQUIRE(run("fit --input " + (tmp / "s.txt") +
              " --family gb2 --starts 2 --max-iter 1500 --out " +
              (tmp / "fit.json")) == 0);
  CHECK(run("utest --input " + (tmp / "s.txt") +
            " --model mgb --params-from " + (tmp / "fit.json") + " --out " +
            (tmp / "u.json")) == 2);

  // usage: an explicitly empty tail-end window
  CHECK(run("utest --input " + (tmp / "s.txt") +
            " --model gb2 --params-from " + (tmp / "fit.json") +
            " --window 0 --out " + (tmp / "u.json")) == 2);
}

TEST_CASE("mgb synthesis respects the support bound") {
  Scratch tmp;
  REQUIRE(run("synth --family mgb --alpha 3.3 --beta1 1342.3 --beta2 163.9 "
              "--p 3.6 --q 1.0 --n 3000 --seed 9 --out " +
              (tmp / "mgb.txt")) == 0);
  const auto sample = gbtail::load_sample(tmp / "mgb.txt", "mgb");
  CHECK(sample.m() == 3000);
  CHECK(sample.max() < 1342.3);
}

TEST_CASE("ingest-hp and ingest-hpi command flows") {
  Scratch tmp;
  {
    std::ofstream prices(tmp / "prices.csv");
    prices << "price,year,class\n";
    for (int i = 0; i < 200; ++i) {
      prices << (50000 + 997 * i) << ',' << (1970 + i % 40) << ",sf\n";
    }
    prices << "0,1995,sf\n";
  }
  {
    std::ofstream defl(tmp / "deflator.csv");
    defl << "year,factor\n";
    for (int y = 1970; y <= 2010; ++y) {
      defl << y << ',' << (1.0 + 0.03 * (y - 1970)) << '\n';
    }
  }
  REQUIRE(run("ingest-hp --input " + (tmp / "prices.csv") +
              " --col-class class --class-filter sf --deflator " +
              (tmp / "deflator.csv") + " --base-year 2010 --out " +
              (tmp / "hp.txt")) == 0);
  const auto hp = gbtail::load_sample(tmp / "hp.txt", "hp");
  CHECK(hp.m() == 200);

  {
    std::ofstream hpi(tmp / "hpi.csv");
    hpi << "\"Five-Digit ZIP Code\",Year,\"Annual Change (%)\",HPI,"
           "\"HPI with 1990 base\",\"HPI with 2000 base\"\n";
    for (int z = 0; z < 60; ++z) {
      for (int y = 2018; y <= 2020; ++y) {
        hpi << 10000 + z << ',' << y << ",1.0," << (100.0 + z + y - 2018)
            << ",90,80\n";
      }
    }
  }
  REQUIRE(run("ingest-hpi --input " + (tmp / "hpi.csv") +
              " --years 2018-2019 --out " + (tmp / "hpi.txt")) == 0);
  const auto hpi = gbtail::load_sample(tmp / "hpi.txt", "hpi");
  CHECK(hpi.m() == 120);

  // a year with no rows
  CHECK(run("ingest-hpi --input " + (tmp / "hpi.csv") +
            " --years 1999 --out " + (tmp / "none.txt")) == 5);
}

TEST_CASE("config file supplies flags, command line wins") {
  Scratch tmp;
  {
    std::ofstream cfg(tmp / "synth.ini");
    cfg << "[synth]\n"
        << "family=gb2\nalpha=1.6\nbeta2=58\np=5\nq=3\nn=100\nseed=7\n"
        << "out=" << (tmp / "from_config.txt") << "\n";
  }
  REQUIRE(run("--config " + (tmp / "synth.ini") + " synth") == 0);
  CHECK(fs::exists(tmp / "from_config.txt"));

  REQUIRE(run("--config " + (tmp / "synth.ini") + " synth --seed 8 --out " +
              (tmp / "override.txt")) == 0);
  CHECK(slurp(tmp / "from_config.txt") != slurp(tmp / "override.txt"));
}

TEST_SUITE_END();
