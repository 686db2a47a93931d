#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ptauction/sim_harness.hpp"

namespace ptauction::sim {
namespace {

TEST(Truth, CdfsAndSupports) {
  const auto u = Truth::uniform();
  EXPECT_DOUBLE_EQ(u.cdf(4.3), 0.5);
  const auto g = Truth::gamma();
  EXPECT_GT(g.cdf(1.0), 0.5);  // heavy mass near zero
  const auto mix = Truth::mixture();
  EXPECT_NEAR(mix.cdf(5.0), 0.5 * g.cdf(5.0) + 0.5 * 0.5 / (1 - 0.5 * std::erfc(5.0 / std::sqrt(2.0))), 1e-6);
  EXPECT_THROW(Truth::parse("beta"), std::invalid_argument);
}

TEST(Truth, BruteForceOptima) {
  const auto u = true_optimum(Truth::uniform(), 5.2);
  EXPECT_NEAR(u.price, 5.75, 1e-9);
  EXPECT_NEAR(u.profit, 0.075625, 1e-12);
  const auto g = true_optimum(Truth::gamma(), 5.2);
  EXPECT_GT(g.price, 7.5);
  EXPECT_LT(g.price, 9.5);
}

TEST(Truth, MixtureSamplerUsesBothComponents) {
  const auto mix = Truth::mixture();
  Rng rng = make_rng(3, {});
  const int n = 40000;
  int near_five = 0;
  for (int i = 0; i < n; ++i) {
    const double x = mix.sample(rng);
    near_five += x > 3.0 && x < 7.0;
  }
  const double p = 0.5 * (Truth::gamma().cdf(7.0) - Truth::gamma().cdf(3.0)) + 0.5 * 0.9545;
  EXPECT_NEAR(static_cast<double>(near_five) / n, p, 0.01);
}

TEST(GenerateReplication, BidderCountsAndSupport) {
  Rng rng = make_rng(5, {});
  const auto ds = generate_replication(Truth::uniform(), 10000, 18.5, rng);
  EXPECT_EQ(ds.size(), 10000u);
  double s = 0.0, ss = 0.0;
  for (const auto& o : ds.observations()) {
    ASSERT_GE(o.n_bidders, 2);
    ASSERT_GT(o.second_highest, 2.3);
    ASSERT_LT(o.second_highest, 6.3);
    s += static_cast<double>(o.n_bidders);
    ss += static_cast<double>(o.n_bidders * o.n_bidders);
  }
  const double mean = s / 1e4;
  const double se = std::sqrt((ss / 1e4 - mean * mean) / 1e4);
  EXPECT_NEAR(mean, 18.5, 3 * se);
}

TEST(GenerateReplication, PointMassTriggersTieHandling) {
  Rng rng = make_rng(6, {});
  EXPECT_THROW(generate_replication(Truth::point_mass(4.0), 3, 18.5, rng), auction::DataError);
  auction::TieOptions jitter{auction::TiePolicy::kJitter, 1};
  const auto ds = generate_replication(Truth::point_mass(4.0), 3, 18.5, rng, jitter);
  EXPECT_EQ(ds.size(), 3u);
  for (const auto& o : ds.observations()) EXPECT_NEAR(o.second_highest, 4.0, 0.005);
}

StudyConfig tiny_study() {
  StudyConfig c;
  c.truths = {"uniform"};
  c.auction_counts = {16};
  c.replications = 3;
  c.gibbs_burn_in = 50;
  c.gibbs_draws = 200;
  c.mh_iterations = 600;
  c.mh_burn_in = 200;
  c.mh_cdf_draws = 50;
  return c;
}

TEST(RunStudy, DeterministicAndNonPositiveLoss) {
  const auto cfg = tiny_study();
  const auto a = run_study(cfg);
  const auto b = run_study(cfg);
  std::ostringstream ca, cb;
  write_results_csv(ca, a);
  write_results_csv(cb, b);
  EXPECT_EQ(ca.str(), cb.str());
  ASSERT_EQ(a.rows.size(), 3u);
  for (const auto& r : a.rows) {
    EXPECT_EQ(r.completed + r.failures, 3);
    EXPECT_LE(r.percent_loss, 1e-9);
    EXPECT_NEAR(r.optimal_price, 5.75, 1e-9);
  }
  EXPECT_EQ(a.replications.size(), 9u);
}

TEST(RunStudy, ThreadCountDoesNotChangeResults) {
  auto cfg = tiny_study();
  const auto serial = run_study(cfg);
  cfg.threads = 3;
  const auto parallel = run_study(cfg);
  std::ostringstream a, b;
  write_replications_csv(a, serial);
  write_replications_csv(b, parallel);
  EXPECT_EQ(a.str(), b.str());
}

TEST(RunStudy, LargestCaseCappedAtTenReplications) {
  auto cfg = tiny_study();
  cfg.auction_counts = {1000};
  cfg.replications = 12;
  cfg.methods = {Method::kTruncatedNormal};
  cfg.mh_iterations = 30;
  cfg.mh_burn_in = 10;
  const auto r = run_study(cfg);
  EXPECT_EQ(r.rows.at(0).completed + r.rows.at(0).failures, 10);
}

TEST(RunStudy, FailuresAreRecorded) {
  auto cfg = tiny_study();
  cfg.methods = {Method::kGamma};
  cfg.mh_iterations = 5;
  cfg.mh_burn_in = 1;
  cfg.y_max = 1.0;  // price grid upper end below the cost
  const auto r = run_study(cfg);
  EXPECT_EQ(r.rows.at(0).failures, 3);
  EXPECT_FALSE(r.replications.at(0).error.empty());
}

TEST(RunStudy, CsvLayouts) {
  const auto r = run_study(tiny_study());
  std::ostringstream res, loss;
  write_results_csv(res, r);
  write_percent_loss_csv(loss, r);
  EXPECT_EQ(res.str().substr(0, res.str().find('\n')),
            "truth,M,method,reps,failures,price_mean,price_se,profit_cents_mean,profit_cents_se,optimal_price,"
            "optimal_profit_cents");
  EXPECT_EQ(loss.str().substr(0, loss.str().find('\n')), "truth,M,method,percent_loss");
  EXPECT_EQ(&r.row("uniform", 16, Method::kPolyaTree), &r.rows[0]);
  EXPECT_THROW(r.row("gamma", 16, Method::kPolyaTree), std::out_of_range);
}

TEST(Methods, NamesRoundTrip) {
  for (Method m : {Method::kPolyaTree, Method::kGamma, Method::kTruncatedNormal}) {
    EXPECT_EQ(parse_method(method_name(m)), m);
  }
  EXPECT_EQ(parse_method("pt"), Method::kPolyaTree);
  EXPECT_THROW(parse_method("bart"), std::invalid_argument);
}

}  // namespace
}  // namespace ptauction::sim
