#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptauction/auction.hpp"
#include "ptauction/posterior_cdf.hpp"
#include "ptauction/random.hpp"

namespace ptauction::parametric {

enum class Family {
  kGamma,            // (shape a, rate b)
  kTruncatedNormal,  // (location mu, scale sigma) of the normal before truncation to (0, inf)
};

std::string family_name(Family family);
Family parse_family(const std::string& name);
std::array<std::string, 2> parameter_names(Family family);

using Theta = std::array<double, 2>;

// A fully specified member of a family. Log-scale evaluators stay finite far
// into the tails (e.g. truncated normals with mu << 0).
class ParametricModel {
 public:
  ParametricModel(Family family, Theta theta);

  Family family() const { return family_; }
  const Theta& theta() const { return theta_; }

  double cdf(double y) const;
  double pdf(double y) const;
  double log_pdf(double y) const;
  double log_cdf(double y) const;
  double log_sf(double y) const;  // log(1 - cdf)
  // log cdf and log sf together; cheaper than the two calls for the gamma.
  std::pair<double, double> log_cdf_sf(double y) const;
  double sample(Rng& rng) const;

  static bool valid(Family family, const Theta& theta);

 private:
  Family family_;
  Theta theta_;
  double log_mass_ = 0.0;  // truncated normal: log P(X > 0) before truncation
  double log_norm_ = 0.0;  // density normalizing constant (log)
};

// log prod_i N_i (N_i - 1) (1 - Psi(y_i2)) Psi(y_i2)^(N_i - 2) psi(y_i2).
// Returns -inf when any factor vanishes or theta is outside the family.
double order_stat_loglik(Family family, const Theta& theta, const auction::AuctionDataset& dataset);

// Same density for a single auction, exposed for checks.
double order_stat_log_density(const ParametricModel& model, double y, std::int64_t n_bidders);

struct MhConfig {
  int iterations = 60000;
  int burn_in = 10000;
  std::uint64_t seed = 1;
  // Proposal step per parameter: multiplicative (log scale) for positive
  // parameters, additive for the normal location.
  Theta step = {0.35, 0.35};
  // Prior standard deviations. Positive parameters get half-normal
  // (truncated-normal(0, sd^2)) priors, the location a N(0, sd^2) prior.
  Theta prior_sd = {100.0, 100.0};
  Theta initial = {0.0, 0.0};  // 0 -> family default start
  // Rescale steps in batches of 50 during burn-in toward this per-component
  // acceptance; the retained chain uses the frozen steps.
  bool adapt = true;
  double target_acceptance = 0.35;
};

MhConfig default_mh_config(Family family);

struct ChainDraw {
  int iteration = 0;
  Theta theta{};
  double log_posterior = 0.0;
};

struct MhResult {
  Family family = Family::kGamma;
  std::vector<ChainDraw> draws;  // post burn-in
  Theta step{};                  // proposal steps after burn-in adaptation
  Theta acceptance{};            // per parameter, post burn-in
  double acceptance_rate = 0.0;  // mean of the two

  Theta posterior_mean() const;
};

// Raised when every proposal was rejected; the message suggests rescaling.
class ChainStuckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Component-wise random-walk Metropolis-Hastings on the order-statistic
// posterior. An empty dataset samples the prior.
MhResult fit_mh(Family family, const auction::AuctionDataset& dataset, const MhConfig& config);

double log_prior(Family family, const Theta& theta, const Theta& prior_sd);

// Posterior over CDFs: mean of Psi(. | theta^(t)) over the retained draws
// (thinned to at most `max_draws`, evenly spaced).
class ParametricPosterior : public PosteriorCdf {
 public:
  ParametricPosterior(Family family, std::span<const Theta> draws);
  static ParametricPosterior from_chain(const MhResult& chain, std::size_t max_draws = 2000);

  double mean_cdf(double x) const override;
  std::size_t draw_count() const override { return models_.size(); }
  void cdf_draws(double x, std::vector<double>& out) const override;

 private:
  std::vector<ParametricModel> models_;
};

// CSV `iteration,<param1>,<param2>,log_posterior`.
void write_draws_csv(std::ostream& out, const MhResult& chain);

}  // namespace ptauction::parametric
