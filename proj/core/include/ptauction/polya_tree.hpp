#pragma once

// Polya-tree posterior for valuation distributions observed only through
// second-highest bids.
//
// The partition telescopes to the left: level m splits (0, y_{m-1}) at the
// m-th largest second-highest bid y_m, so every node is either the lower set
// B_{0^m} = (0, y_m) or the upper set B_{0^{m-1}1} = [y_m, y_{m-1}) (with
// y_0 = +inf). All sub-maximal valuations then resolve to a known node and
// only the location of each auction's maximum is latent; a Gibbs sampler
// alternates beta draws of the split probabilities with draws of those
// memberships.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptauction/auction.hpp"
#include "ptauction/base_measure.hpp"
#include "ptauction/posterior_cdf.hpp"
#include "ptauction/random.hpp"

namespace ptauction::pt {

// e^-20: the "small but positive" strength used for weakly informative priors.
inline const double kTinyStrength = 2.061153622438557828e-09;

struct NodeIndex {
  int level = 1;       // m >= 1
  bool upper = false;  // false: 0^m, true: 0^{m-1}1

  static NodeIndex lower_at(int m) { return {m, false}; }
  static NodeIndex upper_at(int m) { return {m, true}; }
  // Accepts only the telescoping shapes 0^m and 0^{m-1}1.
  static std::optional<NodeIndex> parse(std::string_view bits);

  std::string bits() const;
  bool operator==(const NodeIndex&) const = default;
};

class Partition {
 public:
  // Cutpoints in strictly descending order.
  explicit Partition(std::vector<double> cutpoints);

  int depth() const { return static_cast<int>(cutpoints_.size()); }
  std::size_t node_count() const { return 2 * cutpoints_.size(); }
  std::span<const double> cutpoints() const { return cutpoints_; }
  // y_m for m in [1, depth()].
  double cutpoint(int m) const { return cutpoints_[static_cast<std::size_t>(m - 1)]; }

  Interval lower(int m) const;
  Interval upper(int m) const;
  Interval interval(NodeIndex node) const;

  // Nodes level by level, lower before upper: B_0, B_1, B_00, B_01, ...
  std::vector<NodeIndex> nodes() const;

 private:
  std::vector<double> cutpoints_;
};

// Throws std::invalid_argument for an empty dataset.
Partition build_partition(const auction::AuctionDataset& dataset);

// gamma_m as a function of the level m.
using DepthWeight = std::function<double(int)>;
DepthWeight quadratic_depth_weight(double k);  // k m^2
DepthWeight constant_depth_weight(double gamma);

// Per-level parameters of the two children of B_{0^{m-1}}; index m - 1.
struct HyperParams {
  std::vector<double> lower;  // alpha_{0^m}
  std::vector<double> upper;  // alpha_{0^{m-1}1}

  int depth() const { return static_cast<int>(lower.size()); }
  double alpha(NodeIndex node) const;
};

// alpha_eps = depth_weight(m) * H(B_eps).
HyperParams init_hyperparams(const Partition& partition, const BaseMeasure& base,
                             const DepthWeight& depth_weight);

struct CountTable {
  std::vector<std::int64_t> lower;  // n(B_{0^m}), index m - 1
  std::vector<std::int64_t> upper;  // n(B_{0^{m-1}1})

  int depth() const { return static_cast<int>(lower.size()); }
  std::int64_t count(NodeIndex node) const;
};

// Counts of everything but the auction maxima, each at the deepest node it is
// known to occupy: y_i2 in B_{0^{i-1}1} (and its ancestors) and the N_i - 2
// lower valuations of auction i in B_{0^i} (and its ancestors).
CountTable deterministic_counts(const auction::AuctionDataset& dataset);

// Adds the maxima: z_i = j places y_i1 in B_{0^{j-1}1}. `z` holds 1-based
// values with z_1 = 1 and z_i in [1, i]; throws std::invalid_argument otherwise.
CountTable full_counts(const auction::AuctionDataset& dataset, std::span<const int> z);
void add_memberships(CountTable& counts, std::span<const int> z);

HyperParams updated(const HyperParams& prior, const CountTable& counts);

// One draw of the split probabilities, per level m (index m - 1):
// lower = C_{0^{m-1}0}, upper = C_{0^{m-1}1} = 1 - lower.
struct Conditionals {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> log_lower;
  std::vector<double> log_upper;

  int depth() const { return static_cast<int>(lower.size()); }
};

// C_{eps0} ~ Beta(alpha_{eps0} + n_{eps0}, alpha_{eps1} + n_{eps1}) independently.
// Throws std::domain_error if both updated parameters vanish at some split.
Conditionals draw_conditionals(const HyperParams& hyper, const CountTable& counts, Rng& rng);

// P(z_i = j | C) for j = 1..i: the probability of B_{0^{j-1}1} along its
// path, renormalized over the sets the maximum of auction i can occupy.
std::vector<double> membership_probabilities(const Conditionals& c, int auction);

// Draws z_1..z_M independently given C; z_1 = 1 always.
std::vector<int> draw_memberships(const Conditionals& c, int auctions, Rng& rng);

struct GibbsConfig {
  int burn_in = 1000;
  int draws = 10000;
  std::uint64_t seed = 1;
  // Keep the per-draw split probabilities (needed for raw-product bands).
  bool keep_conditionals = true;
};

// Retained post-burn-in states. Memberships and split draws are stored
// row-major, one row of `depth` values per draw.
class GibbsOutput {
 public:
  int depth() const { return depth_; }
  std::size_t draws() const { return draws_; }
  bool has_conditionals() const { return !c_lower_.empty(); }

  std::span<const int> memberships(std::size_t t) const;
  std::span<const double> conditional_lower(std::size_t t) const;
  std::span<const double> conditional_upper(std::size_t t) const;
  const CountTable& deterministic() const { return deterministic_; }

  // alpha^(t): the prior updated by the data and the t-th membership draw.
  HyperParams updated_alpha(const HyperParams& prior, std::size_t t) const;

 private:
  friend GibbsOutput run_gibbs(const auction::AuctionDataset&, const HyperParams&, const GibbsConfig&);

  int depth_ = 0;
  std::size_t draws_ = 0;
  CountTable deterministic_;
  std::vector<int> z_;
  std::vector<double> c_lower_;
  std::vector<double> c_upper_;
};

// Alternates draw_conditionals (given the counts implied by the current Z)
// and draw_memberships, starting from z_i = 1. Deterministic given the seed.
GibbsOutput run_gibbs(const auction::AuctionDataset& dataset, const HyperParams& hyper,
                      const GibbsConfig& config);

// Which per-draw node probabilities feed bands and profit intervals:
// the sampled products of C, or their conditional means given Z.
enum class BandSource { kRaw, kRaoBlackwell };

// How the CDF is filled in between cutpoints. kLinear interpolates linearly
// between the cutpoint values, anchored at (0, 0) and (support max of H, 1);
// kBaseMeasure spreads each leaf's mass proportionally to H.
enum class LeafInterpolation { kLinear, kBaseMeasure };

struct EstimateOptions {
  double band_level = 0.90;
  BandSource band_source = BandSource::kRaw;
  LeafInterpolation interpolation = LeafInterpolation::kLinear;
};

struct NodeSummary {
  NodeIndex node;
  Interval interval;
  double prior_mass = 0.0;      // H(B)
  double prior_alpha = 0.0;
  double posterior_mean = 0.0;  // Rao-Blackwellized mean mass
  double raw_mean = 0.0;        // average of the sampled products
  double rb_lo = 0.0, rb_hi = 0.0;
  double raw_lo = 0.0, raw_hi = 0.0;
};

class CdfEstimate : public PosteriorCdf {
 public:
  std::span<const NodeSummary> nodes() const { return nodes_; }
  const NodeSummary& node(NodeIndex index) const;
  std::span<const double> cutpoints() const { return cutpoints_; }
  const BaseMeasure& base() const { return base_; }
  const EstimateOptions& options() const { return options_; }
  double upper_anchor() const { return knots_.back(); }

  // Posterior mean CDF at y_1 > ... > y_M (i.e. the mass of B_{0^m}).
  std::vector<double> cdf_at_cutpoints() const;

  double mean_cdf(double x) const override;
  std::size_t draw_count() const override { return draws_; }
  void cdf_draws(double x, std::vector<double>& out) const override;

 private:
  friend CdfEstimate estimate_cdf(const GibbsOutput&, const HyperParams&, const Partition&,
                                  const BaseMeasure&, const EstimateOptions&);

  struct Segment {
    std::size_t left = 0;  // knot index; right = left + 1
    double weight = 0.0;   // F(x) = (1 - w) F[left] + w F[left + 1]
  };
  Segment locate(double x) const;

  explicit CdfEstimate(BaseMeasure base) : base_(std::move(base)) {}

  BaseMeasure base_;
  EstimateOptions options_;
  std::vector<double> cutpoints_;
  std::vector<NodeSummary> nodes_;
  // Ascending knots 0, y_M, ..., y_1, anchor with CDF values 0, ..., 1.
  std::vector<double> knots_;
  std::vector<double> mean_knot_cdf_;
  // Per-draw CDF at the interior knots y_M..y_1 from the band source,
  // row-major (draws_ x depth).
  std::vector<double> draw_knot_cdf_;
  std::size_t draws_ = 0;
};

// Rao-Blackwellized posterior mean mass of every node, per-node quantile
// bands from both the Rao-Blackwellized and the raw products, and a CDF
// evaluator for arbitrary prices.
CdfEstimate estimate_cdf(const GibbsOutput& gibbs, const HyperParams& prior, const Partition& partition,
                         const BaseMeasure& base, const EstimateOptions& options = {});

// One row per node: bits, interval bounds, prior mass, posterior mean mass and
// the band quantiles of the configured source.
void write_posterior_table(std::ostream& out, const CdfEstimate& estimate);

}  // namespace ptauction::pt
