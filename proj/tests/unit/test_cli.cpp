#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ptauction/cli.hpp"
#include "ptauction/polya_tree.hpp"

namespace ptauction::cli {
namespace {

namespace fs = std::filesystem;

const std::string kData = PTAUCTION_TEST_DATA_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ptauction_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ptauction");
    out_.str("");
    err_.str("");
    return run(args, out_, err_);
  }

  nlohmann::json read_json(const fs::path& p) {
    std::ifstream in(p);
    return nlohmann::json::parse(in);
  }

  std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, StrengthParsing) {
  EXPECT_DOUBLE_EQ(parse_strength("tiny"), pt::kTinyStrength);
  EXPECT_DOUBLE_EQ(parse_strength("20"), 20.0);
  EXPECT_THROW(parse_strength("0"), std::exception);
  EXPECT_THROW(parse_strength("-1"), std::exception);
  EXPECT_THROW(parse_strength("big"), std::exception);
}

TEST_F(CliTest, FitPtWritesArtifacts) {
  const auto out = dir_ / "pt";
  ASSERT_EQ(run_cli({"fit-pt", "--input", kData + "/jewelry_auctions.csv", "--prior", "uniform", "--ymax", "20",
                     "--k", "tiny", "--burn-in", "200", "--draws", "2000", "--out", out.string()}),
            0)
      << err_.str();
  for (const char* f : {"posterior_table.csv", "cdf_grid.csv", "profit_curve.csv", "summary.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const auto summary = read_json(out / "summary.json");
  EXPECT_NEAR(summary["optimal_price"].get<double>(), 12.6, 0.7);
  EXPECT_EQ(summary["interval"].size(), 2u);
  const auto manifest = read_json(out / "manifest.json");
  EXPECT_EQ(manifest["subcommand"], "fit-pt");
  EXPECT_EQ(manifest["config"]["seed"], 1);
  EXPECT_EQ(manifest["config"]["k"], "tiny");
}

TEST_F(CliTest, FitPtIsBitReproducible) {
  const std::vector<std::string> base = {"fit-pt", "--input", kData + "/jewelry_auctions.csv", "--prior", "elicited",
                                         "--elicitation", kData + "/manager_elicitation.csv", "--k", "20",
                                         "--burn-in", "100", "--draws", "500", "--seed", "9", "--out"};
  auto a = base;
  a.push_back((dir_ / "a").string());
  auto b = base;
  b.push_back((dir_ / "b").string());
  ASSERT_EQ(run_cli(a), 0) << err_.str();
  ASSERT_EQ(run_cli(b), 0) << err_.str();
  for (const char* f : {"posterior_table.csv", "cdf_grid.csv", "profit_curve.csv", "summary.json"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
}

TEST_F(CliTest, MissingInputFailsWithoutOutputs) {
  const auto out = dir_ / "missing";
  EXPECT_NE(run_cli({"fit-pt", "--input", kData + "/nope.csv", "--out", out.string()}), 0);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_NE(err_.str().find("nope.csv"), std::string::npos);
}

TEST_F(CliTest, DataErrorsCarryRowNumbers) {
  fs::create_directories(dir_);
  const auto csv = dir_ / "dup.csv";
  std::ofstream(csv) << "auction_id,n_bidders,transaction_price\na,5,3.01\nb,6,4.00\nc,7,3.01\n";
  const auto out = dir_ / "o";
  EXPECT_EQ(run_cli({"fit-pt", "--input", csv.string(), "--out", out.string()}), 1);
  EXPECT_NE(err_.str().find("row 3"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(run_cli({"fit-pt", "--input", csv.string(), "--jitter-ties", "--burn-in", "10", "--draws", "50",
                     "--out", out.string()}),
            0)
      << err_.str();
  const auto manifest = read_json(out / "manifest.json");
  EXPECT_EQ(manifest["config"]["data"]["tie_adjustments"].size(), 2u);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}), 2);
  EXPECT_EQ(run_cli({"fit-pt", "--input", kData + "/jewelry_auctions.csv"}), 2);  // no --out
  EXPECT_EQ(run_cli({"fit-pt", "--input", kData + "/jewelry_auctions.csv", "--k", "huge", "--out",
                     (dir_ / "x").string()}),
            2);
  EXPECT_EQ(run_cli({"fit-pt", "--input", kData + "/jewelry_auctions.csv", "--prior", "elicited", "--out",
                     (dir_ / "x").string()}),
            2);
  EXPECT_FALSE(fs::exists(dir_ / "x"));
  EXPECT_EQ(run_cli({"--help"}), 0);
  EXPECT_NE(out_.str().find("fit-parametric"), std::string::npos);
}

TEST_F(CliTest, FitParametricReportsDiagnostics) {
  const auto out = dir_ / "tn";
  ASSERT_EQ(run_cli({"fit-parametric", "--input", kData + "/jewelry_auctions.csv", "--family", "truncated-normal",
                     "--iterations", "6000", "--burn-in", "2000", "--cdf-draws", "200", "--out", out.string()}),
            0)
      << err_.str();
  EXPECT_TRUE(fs::exists(out / "draws.csv"));
  const auto manifest = read_json(out / "manifest.json");
  const double rate = manifest["diagnostics"]["acceptance_rate"];
  EXPECT_GT(rate, 0.1);
  EXPECT_LT(rate, 0.6);
}

TEST_F(CliTest, SimulateIsDeterministicAndReadsConfigFile) {
  fs::create_directories(dir_);
  const auto cfg = dir_ / "study.cfg";
  std::ofstream(cfg) << "# desk check\ntruth = uniform\nM = 16\nreps = 2\nmethod = pt, tn\n"
                        "gibbs-burn-in = 50\ngibbs-draws = 200\nmh-iterations = 600\nmh-burn-in = 200\n"
                        "mh-cdf-draws = 50\nseed = 7\n";
  ASSERT_EQ(run_cli({"simulate", "--config", cfg.string(), "--out", (dir_ / "a").string()}), 0) << err_.str();
  ASSERT_EQ(run_cli({"simulate", "--config", cfg.string(), "--out", (dir_ / "b").string()}), 0) << err_.str();
  EXPECT_EQ(slurp(dir_ / "a" / "study_results.csv"), slurp(dir_ / "b" / "study_results.csv"));
  const auto manifest = read_json(dir_ / "a" / "manifest.json");
  EXPECT_EQ(manifest["config"]["replications"], 2);
  EXPECT_EQ(manifest["config"]["methods"].size(), 2u);
  // Command-line flags win over the file.
  ASSERT_EQ(run_cli({"simulate", "--config", cfg.string(), "--reps", "1", "--out", (dir_ / "c").string()}), 0);
  EXPECT_EQ(read_json(dir_ / "c" / "manifest.json")["config"]["replications"], 1);
}

TEST_F(CliTest, AuctionSim) {
  ASSERT_EQ(run_cli({"auction-sim", "--valuations", "3.00,5.00,10.00"}), 0) << err_.str();
  const auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j["final_price"], "5.01");
  EXPECT_EQ(j["observed_bid_count"], 3);
  EXPECT_EQ(j["winner_index"], 2);
  ASSERT_EQ(run_cli({"auction-sim", "--truth", "uniform", "--bidders", "12", "--seed", "3", "--out",
                     (dir_ / "a").string()}),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "manifest.json"));
  EXPECT_EQ(run_cli({"auction-sim", "--valuations", "3.001"}), 1);
}

}  // namespace
}  // namespace ptauction::cli
