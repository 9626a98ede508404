#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "oilsent/cli.hpp"
#include "oilsent/report_io.hpp"
#include "synthetic.hpp"

using namespace oilsent;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "oilsent");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = oilsent::cli::run_cli(int(argv.size()), argv.data(), o, e);
  return {code, o.str(), e.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Drops the leading `# run_config` comment.
std::string body(const fs::path& p) {
  auto s = slurp(p);
  if (s.starts_with("# run_config: ")) s = s.substr(s.find('\n') + 1);
  return s;
}

nlohmann::json json_file(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

std::string data(const char* name) { return (fs::path(OILSENT_DATA_DIR) / name).string(); }

fs::path write_prices(const fs::path& dir, std::size_t days, std::uint64_t seed) {
  const auto prices = testkit::random_walk_prices(days, seed);
  const auto p = dir / "prices.csv";
  std::ofstream out(p);
  write_prices_csv(out, prices);
  return p;
}

}  // namespace

TEST(Cli, HelpAndUsage) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"label"}).code, 2);
}

TEST(Cli, LabelGoldSet) {
  testkit::TempDir dir;
  auto r = run({"label", "--headlines", data("gold_test.csv"), "--out", dir.path().string(),
                "--gnuplot"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto silver = body(dir.path() / "silver.csv");
  EXPECT_EQ(std::count(silver.begin(), silver.end(), '\n'), 19);
  EXPECT_TRUE(fs::exists(dir.path() / "histogram.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "histogram.gp"));
  EXPECT_EQ(body(dir.path() / "unmatched.csv"), "id,date,text,source\n");
  EXPECT_TRUE(slurp(dir.path() / "silver.csv").starts_with("# run_config: {"));
}

TEST(Cli, LabelEmptyInput) {
  testkit::TempDir dir;
  const auto in = dir.path() / "empty.csv";
  std::ofstream(in) << "id,date,text,source\n";
  auto r = run({"label", "--headlines", in.string(), "--out", (dir.path() / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(body(dir.path() / "o" / "silver.csv"), "id,date,text,topic,direction,label\n");
}

TEST(Cli, LabelMissingFile) {
  testkit::TempDir dir;
  auto r = run({"label", "--headlines", (dir.path() / "nope.csv").string(), "--out",
                dir.path().string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nope.csv"), std::string::npos) << r.err;
}

TEST(Cli, SplitAfterLabel) {
  testkit::TempDir dir;
  ASSERT_EQ(run({"label", "--headlines", data("gold_test.csv"), "--out", dir.path().string()}).code, 0);
  auto r = run({"split", "--silver", (dir.path() / "silver.csv").string(), "--ratios",
                "0.5,0.25,0.25", "--seed", "3", "--out", (dir.path() / "s").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t rows = 0;
  for (const char* f : {"train.csv", "test.csv", "validation.csv"}) {
    const auto b = body(dir.path() / "s" / f);
    EXPECT_TRUE(b.starts_with("text,label\n"));
    rows += std::count(b.begin(), b.end(), '\n') - 1;
  }
  EXPECT_EQ(rows, 18u);
  auto bad = run({"split", "--silver", (dir.path() / "silver.csv").string(), "--ratios",
                  "0.5,0.5,0.1", "--out", (dir.path() / "t").string()});
  EXPECT_EQ(bad.code, 2);
}

TEST(Cli, BacktestOracle) {
  testkit::TempDir dir;
  const auto prices = write_prices(dir.path(), 200, 4);
  auto r = run({"backtest", "--prices", prices.string(), "--classifier", "oracle", "--out",
                (dir.path() / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_file(dir.path() / "o" / "report.json");
  EXPECT_DOUBLE_EQ(j["classifiers"][0]["report"]["accuracy"].get<double>(), 1.0);
  EXPECT_TRUE(is_backtest_table(j["classifiers"][0]["report"]["table"]));
  EXPECT_EQ(j["run_config"]["subcommand"], "backtest");
  EXPECT_TRUE(fs::exists(dir.path() / "o" / "confusion_oracle.csv"));
  EXPECT_TRUE(fs::exists(dir.path() / "o" / "cumulative_oracle.csv"));
}

TEST(Cli, BacktestRandomIsReproducible) {
  testkit::TempDir dir;
  const auto prices = write_prices(dir.path(), 300, 4);
  for (const char* o : {"a", "b"})
    ASSERT_EQ(run({"backtest", "--prices", prices.string(), "--classifier", "random", "--seed", "7",
                   "--out", (dir.path() / o).string()})
                  .code,
              0);
  auto a = json_file(dir.path() / "a" / "report.json");
  auto b = json_file(dir.path() / "b" / "report.json");
  a.erase("run_config");
  b.erase("run_config");
  EXPECT_EQ(a, b);
  EXPECT_EQ(body(dir.path() / "a" / "report.txt"), body(dir.path() / "b" / "report.txt"));
}

TEST(Cli, BacktestCompare) {
  testkit::TempDir dir;
  const auto prices = write_prices(dir.path(), 300, 4);
  auto r = run({"backtest", "--prices", prices.string(), "--classifier", "oracle", "--classifier",
                "random", "--compare", "--out", (dir.path() / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_file(dir.path() / "o" / "report.json");
  ASSERT_EQ(j["comparisons"].size(), 1u);
  EXPECT_EQ(j["comparisons"][0]["a"], "oracle");
  EXPECT_EQ(j["comparisons"][0]["b"], "random");
  EXPECT_EQ(j["comparisons"][0]["variants"].size(), 4u);
  EXPECT_NE(r.out.find("Chi-square oracle vs random"), std::string::npos);
}

TEST(Cli, BacktestScoresFile) {
  testkit::TempDir dir;
  const auto prices = testkit::random_walk_prices(60, 8);
  const auto pp = write_prices(dir.path(), 60, 8);
  const auto sp = dir.path() / "model.csv";
  {
    std::ofstream out(sp);
    out << "date,score\n";
    for (std::size_t i = 0; i < prices.size(); ++i)
      out << format_date(prices[i].date) << "," << (i % 3 == 0 ? "0.9" : "-0.4") << "\n";
  }
  auto r = run({"backtest", "--prices", pp.string(), "--scores", sp.string(), "--discretize",
                "normalized", "--window", "5", "--out", (dir.path() / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_file(dir.path() / "o" / "report.json");
  EXPECT_EQ(j["classifiers"][0]["classifier"], "model");
  EXPECT_EQ(j["run_config"]["window"], 5);
}

TEST(Cli, SignalWritesSeries) {
  testkit::TempDir dir;
  const auto pp = write_prices(dir.path(), 40, 2);
  auto hs = testkit::random_walk_prices(40, 2);
  const auto hp = dir.path() / "headlines.csv";
  {
    std::ofstream out(hp);
    out << "id,date,text,source\n";
    for (std::size_t i = 0; i < hs.size(); ++i)
      out << i << "," << format_date(hs[i].date) << ","
          << (i % 2 ? "Refinery blast kills 3" : "Oil discovery off Brazil") << ",\n";
  }
  auto r = run({"signal", "--prices", pp.string(), "--headlines", hp.string(), "--silver",
                "--out", (dir.path() / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"returns.csv", "signals.csv", "cumulative.csv"})
    EXPECT_TRUE(fs::exists(dir.path() / "o" / f)) << f;
  const auto sig = body(dir.path() / "o" / "signals.csv");
  EXPECT_TRUE(sig.starts_with("date,raw,normalized,degenerate,discrete,call\n"));
}

TEST(Cli, SimulateFixture) {
  testkit::TempDir dir;
  auto r = run({"simulate", "--fixture", "bundled", "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_file(dir.path() / "simulations.json");
  EXPECT_EQ(j["run_config"]["subcommand"], "simulate");
  for (int k = 1; k <= 9; ++k) {
    const auto p = slurp(dir.path() / ("sim" + std::to_string(k) + "_prompt.txt"));
    EXPECT_TRUE(p.starts_with("# run_config: ")) << k;
    EXPECT_TRUE(fs::exists(dir.path() / ("sim" + std::to_string(k) + "_response.txt")));
  }
  const auto scores = body(dir.path() / "scores.csv");
  EXPECT_TRUE(scores.starts_with("sim,macro_f1,weighted_f1,accuracy\n"));
  EXPECT_EQ(std::count(scores.begin(), scores.end(), '\n'), 10);
}

TEST(Cli, SimulateSim6DumpsTrainingBlock) {
  testkit::TempDir dir;
  auto r = run({"simulate", "--sims", "6", "--fixture", "bundled", "--out", dir.path().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto p = slurp(dir.path() / "sim6_prompt.txt");
  EXPECT_NE(p.find("Labeled Training Dataset:\n1. "), std::string::npos);
  EXPECT_FALSE(fs::exists(dir.path() / "sim1_prompt.txt"));
}

TEST(Cli, SimulateLiveWithoutCredential) {
  testkit::TempDir dir;
  ::unsetenv("OILSENT_CLI_TEST_NO_KEY");
  auto r = run({"simulate", "--live", "--credential-env", "OILSENT_CLI_TEST_NO_KEY", "--sims", "1",
                "--out", dir.path().string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("OILSENT_CLI_TEST_NO_KEY"), std::string::npos) << r.err;
}

TEST(Cli, SimulateBadSims) {
  testkit::TempDir dir;
  EXPECT_EQ(run({"simulate", "--sims", "0..3", "--fixture", "bundled", "--out", dir.path().string()}).code, 2);
}

TEST(Cli, ReportChiSquare) {
  auto r = run({"report", "--chi-square", "1774/3376,1721/3376"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("p=0.19677"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("p=0.20535"), std::string::npos) << r.out;
}

TEST(Cli, ReportRendersSavedJson) {
  testkit::TempDir dir;
  ASSERT_EQ(run({"simulate", "--sims", "1,9", "--fixture", "bundled", "--out", dir.path().string()}).code, 0);
  auto r = run({"report", "--input", (dir.path() / "simulations.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Macro"), std::string::npos);
}

TEST(Cli, ToolBinaryExitCodes) {
  testkit::TempDir dir;
  const std::string tool = OILSENT_TOOL;
  const auto quiet = " >" + (dir.path() / "log").string() + " 2>&1";
  EXPECT_EQ(std::system((tool + " --help" + quiet).c_str()), 0);
  const int rc = std::system((tool + " label --headlines /nonexistent.csv --out " +
                              dir.path().string() + quiet)
                                 .c_str());
  ASSERT_TRUE(WIFEXITED(rc));
  EXPECT_EQ(WEXITSTATUS(rc), 2);
}
