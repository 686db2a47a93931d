#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ptauction/auction.hpp"
#include "ptauction/polya_tree.hpp"
#include "ptauction/random.hpp"

namespace ptauction::sim {

// A known valuation distribution to simulate from.
class Truth {
 public:
  static Truth gamma(double shape = 0.32, double rate = 0.26);
  // Equal-weight mixture of gamma(0.32, 0.26) and truncated-normal(5, 1).
  static Truth mixture();
  static Truth uniform(double lo = 2.3, double hi = 6.3);
  static Truth point_mass(double value);
  // "gamma" | "mixture" | "uniform".
  static Truth parse(const std::string& name);

  const std::string& name() const { return name_; }
  double cdf(double x) const { return cdf_(x); }
  double sample(Rng& rng) const { return sampler_(rng); }

 private:
  Truth(std::string name, std::function<double(double)> cdf, std::function<double(Rng&)> sampler)
      : name_(std::move(name)), cdf_(std::move(cdf)), sampler_(std::move(sampler)) {}

  std::string name_;
  std::function<double(double)> cdf_;
  std::function<double(Rng&)> sampler_;
};

struct Optimum {
  double price = 0.0;
  double profit = 0.0;  // dollars per bidder
};

// Brute-force argmax of (1 - F(x)) (x - c) over [c, hi] in steps of `step`.
Optimum true_optimum(const Truth& truth, double cost, double hi = 40.0, double step = 0.001);

// Poisson(bidder_mean) bidder counts, redrawn until >= 2; the second-highest
// of that many valuations per auction. Real-valued (no cent rounding).
auction::AuctionDataset generate_replication(const Truth& truth, int auctions, double bidder_mean, Rng& rng,
                                             const auction::TieOptions& ties = {});

enum class Method { kPolyaTree, kGamma, kTruncatedNormal };
std::string method_name(Method method);
Method parse_method(const std::string& name);

struct StudyConfig {
  std::vector<std::string> truths = {"gamma", "mixture", "uniform"};
  std::vector<int> auction_counts = {16, 100};
  int replications = 30;
  double bidder_mean = 18.5;
  double cost = 5.2;
  std::vector<Method> methods = {Method::kPolyaTree, Method::kGamma, Method::kTruncatedNormal};
  std::uint64_t seed = 7;

  // Polya tree
  double y_max = 20.0;
  double k = pt::kTinyStrength;
  int gibbs_burn_in = 500;
  int gibbs_draws = 4000;
  pt::LeafInterpolation interpolation = pt::LeafInterpolation::kLinear;

  // Parametric
  int mh_iterations = 12000;
  int mh_burn_in = 2000;
  std::size_t mh_cdf_draws = 400;

  double grid_step = 0.01;
  auction::TieOptions ties;
  unsigned threads = 1;
};

// Large-study replication counts (M = 1,000 x 10, M = 100 and 16 x 100)
// with default chain lengths.
StudyConfig full_study_config();

struct ReplicationResult {
  std::string truth;
  int auctions = 0;
  int replication = 0;
  Method method = Method::kPolyaTree;
  bool ok = false;
  double price = 0.0;
  double true_profit = 0.0;  // dollars per bidder
  std::string error;
};

struct StudyRow {
  std::string truth;
  int auctions = 0;
  Method method = Method::kPolyaTree;
  int completed = 0;
  int failures = 0;
  double price_mean = 0.0;
  double price_se = 0.0;
  double profit_mean_cents = 0.0;
  double profit_se_cents = 0.0;
  double optimal_price = 0.0;
  double optimal_profit_cents = 0.0;
  double percent_loss = 0.0;  // 100 (mean profit - optimum) / optimum
};

struct StudyResult {
  std::vector<StudyRow> rows;
  std::vector<ReplicationResult> replications;

  const StudyRow& row(const std::string& truth, int auctions, Method method) const;
};

// Estimated optimal price for one dataset under one method.
double estimate_price(Method method, const auction::AuctionDataset& dataset, const StudyConfig& config,
                      std::uint64_t seed);

// Runs every (truth, M, replication, method) cell. Method failures are
// recorded per replication and excluded from the means.
StudyResult run_study(const StudyConfig& config);

// truth,M,method,reps,failures,price_mean,price_se,profit_cents_mean,profit_cents_se,optimal_price,optimal_profit_cents
void write_results_csv(std::ostream& out, const StudyResult& result);
// truth,M,method,percent_loss
void write_percent_loss_csv(std::ostream& out, const StudyResult& result);
// One row per replication and method.
void write_replications_csv(std::ostream& out, const StudyResult& result);

}  // namespace ptauction::sim
