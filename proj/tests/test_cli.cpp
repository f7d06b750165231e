#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "tdcast/cli.hpp"
#include "test_support.hpp"

using namespace tdcast;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult result;
  result.code = run_cli(args, out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

const std::string kTwoCountryCsv =
    "country,quarter,indicator,value\n"
    "PT,2000Q1,GDP,1.0\nPT,2000Q1,IP,2.0\n"
    "PT,2000Q2,GDP,1.5\nPT,2000Q2,IP,2.5\n"
    "ES,2000Q1,GDP,3.0\nES,2000Q1,IP,4.0\n"
    "ES,2000Q2,GDP,3.5\nES,2000Q2,IP,4.2\n";

}  // namespace

TEST_CASE("validate: well-formed file passes") {
  auto dir = tdtest::make_temp_dir("cli_validate");
  tdtest::spit(dir / "panel.csv", kTwoCountryCsv);
  auto r = cli({"validate", (dir / "panel.csv").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("countries: 2") != std::string::npos);
  CHECK(r.out.find("status: ok") != std::string::npos);
  CHECK(r.out.find("gap warnings: 0") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("validate: constant series fails naming country and indicator") {
  auto dir = tdtest::make_temp_dir("cli_constant");
  tdtest::spit(dir / "panel.csv",
               "country,quarter,indicator,value\n"
               "PT,2000Q1,GDP,1.0\nPT,2000Q1,IP,7.0\n"
               "PT,2000Q2,GDP,1.5\nPT,2000Q2,IP,7.0\n");
  auto r = cli({"validate", (dir / "panel.csv").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("degenerate series") != std::string::npos);
  CHECK(r.err.find("PT") != std::string::npos);
  CHECK(r.err.find("IP") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("validate: a gap quarter is a warning, not a failure") {
  auto dir = tdtest::make_temp_dir("cli_gap");
  tdtest::spit(dir / "panel.csv",
               "country,quarter,indicator,value\n"
               "PT,2000Q1,GDP,1.0\n"
               "PT,2000Q2,GDP,1.5\n"
               "PT,2000Q4,GDP,1.8\n");  // 2000Q3 missing entirely
  auto r = cli({"validate", (dir / "panel.csv").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("gap warnings: 1") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("validate: unreadable path and malformed rows fail") {
  auto r = cli({"validate", "/nonexistent/panel.csv"});
  CHECK(r.code == 1);

  auto dir = tdtest::make_temp_dir("cli_malformed");
  tdtest::spit(dir / "panel.csv", "country,quarter,indicator,value\nPT,2000Q5,GDP,1.0\n");
  r = cli({"validate", (dir / "panel.csv").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("quarter index out of range") != std::string::npos);
  CHECK(r.err.find("line 2") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("synth writes a parseable panel") {
  auto dir = tdtest::make_temp_dir("cli_synth");
  const auto csv = (dir / "panel.csv").string();
  auto r = cli({"synth", "--countries", "3", "--quarters", "10", "--indicators", "2", "--seed",
                "5", "--out", csv});
  CHECK(r.code == 0);
  CHECK(r.out.find("90 observations") != std::string::npos);  // 3 * 10 * (2 + 1)
  auto v = cli({"validate", csv});
  CHECK(v.code == 0);
  CHECK(v.out.find("countries: 3") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("run: quickstart produces the summary and reruns byte-identically") {
  auto dir = tdtest::make_temp_dir("cli_run");
  const auto csv = (dir / "panel.csv").string();
  REQUIRE(cli({"synth", "--countries", "4", "--quarters", "28", "--indicators", "3",
               "--structure", "nonlinear", "--noise", "0.05", "--seed", "21", "--out", csv})
              .code == 0);
  tdtest::spit(dir / "run.cfg", "data = " + csv +
                                    "\ntest_country = AD\noutput_dir = " +
                                    (dir / "out").string() +
                                    "\nols_cutoff = 2004Q4\nepochs = 25\nseed = 7\n");
  auto r = cli({"run", (dir / "run.cfg").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("ols") != std::string::npos);
  CHECK(r.out.find("td_network") != std::string::npos);
  CHECK(r.out.find("td_linear") != std::string::npos);

  const auto summary = tdtest::slurp(dir / "out" / "summary.csv");
  CHECK(summary.substr(0, 15) == "model,mae,rmse\n");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 4);  // header + 3 model rows

  // rerun into a fresh directory: byte-identical summary and model files
  auto r2 = cli({"run", (dir / "run.cfg").string(), "--output_dir", (dir / "out2").string()});
  REQUIRE(r2.code == 0);
  CHECK(tdtest::slurp(dir / "out2" / "summary.csv") == summary);
  CHECK(tdtest::slurp(dir / "out2" / "model_td_network.txt") ==
        tdtest::slurp(dir / "out" / "model_td_network.txt"));
  CHECK(tdtest::slurp(dir / "out2" / "model_td_linear.txt") ==
        tdtest::slurp(dir / "out" / "model_td_linear.txt"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("run: configs with td_models empty keep only the OLS row") {
  auto dir = tdtest::make_temp_dir("cli_olsonly");
  const auto csv = (dir / "panel.csv").string();
  REQUIRE(cli({"synth", "--countries", "3", "--quarters", "20", "--out", csv}).code == 0);
  tdtest::spit(dir / "run.cfg", "data = " + csv + "\ntest_country = AC\noutput_dir = " +
                                    (dir / "out").string() +
                                    "\nols_cutoff = 2003Q4\ntd_models =\n");
  auto r = cli({"run", (dir / "run.cfg").string()});
  REQUIRE(r.code == 0);
  const auto summary = tdtest::slurp(dir / "out" / "summary.csv");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 2);  // header + ols
  std::filesystem::remove_all(dir);
}

TEST_CASE("run: alpha outside (0,1) is a config validation error") {
  auto dir = tdtest::make_temp_dir("cli_alpha");
  const auto csv = (dir / "panel.csv").string();
  REQUIRE(cli({"synth", "--countries", "3", "--quarters", "16", "--out", csv}).code == 0);
  tdtest::spit(dir / "run.cfg", "data = " + csv + "\ntest_country = AC\noutput_dir = " +
                                    (dir / "out").string() +
                                    "\nols_cutoff = 2002Q4\nalpha = 1.5\n");
  auto r = cli({"run", (dir / "run.cfg").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("alpha must lie in (0,1)") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("run: unknown configuration keys are hard errors") {
  auto dir = tdtest::make_temp_dir("cli_badkey");
  tdtest::spit(dir / "run.cfg", "data = x.csv\nalpa = 0.9\n");
  auto r = cli({"run", (dir / "run.cfg").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("unknown configuration key 'alpa'") != std::string::npos);
  CHECK(r.err.find("line 2") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("run: missing required keys are reported") {
  auto dir = tdtest::make_temp_dir("cli_missing");
  tdtest::spit(dir / "run.cfg", "test_country = AA\n");
  auto r = cli({"run", (dir / "run.cfg").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("'data' is required") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("run: a huge step size ends with the divergence exit code") {
  auto dir = tdtest::make_temp_dir("cli_diverge");
  const auto csv = (dir / "panel.csv").string();
  REQUIRE(cli({"synth", "--countries", "4", "--quarters", "24", "--structure", "nonlinear",
               "--noise", "0.05", "--seed", "3", "--out", csv})
              .code == 0);
  tdtest::spit(dir / "run.cfg", "data = " + csv + "\ntest_country = AD\noutput_dir = " +
                                    (dir / "out").string() +
                                    "\nols_cutoff = 2003Q4\ngamma0 = 50\n");
  auto r = cli({"run", (dir / "run.cfg").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("diverged") != std::string::npos);
  CHECK(!std::filesystem::exists(dir / "out" / "summary.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("help and version") {
  auto help = cli({"--help"});
  CHECK(help.code == 0);
  auto run_help = cli({"run", "--help"});
  CHECK(run_help.code == 0);
  // every config key is documented
  for (const char* key : {"data", "test_country", "target", "output_dir", "ols_cutoff",
                          "td_models", "alpha", "gamma0", "decay_tau", "epochs", "shuffle", "seed",
                          "hidden_nodes", "activation", "features_network", "features_linear",
                          "forecast_rule", "sign_heuristic", "strict_update_order",
                          "delta_log_stride"}) {
    INFO(key);
    CHECK(run_help.out.find(key) != std::string::npos);
  }
  CHECK(cli({"--version"}).code == 0);
  CHECK(cli({}).code == 1);  // a subcommand is required
}
