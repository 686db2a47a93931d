#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ptauction/posterior_cdf.hpp"

namespace ptauction::pricing {

using CdfFunction = std::function<double(double)>;

// Ascending prices lo, lo + step, ..., up to hi (inclusive within rounding).
// Points are computed as lo + i * step to avoid accumulated drift.
std::vector<double> price_grid(double lo, double hi, double step);

// Per-bidder expected profit pi(x) = (1 - F(x)) (x - c), in dollars/bidder.
struct ProfitCurve {
  std::vector<double> price;
  std::vector<double> profit;
  double cost = 0.0;
  // Pointwise posterior bands, filled by profit_intervals.
  std::vector<double> profit_lo;
  std::vector<double> profit_hi;
  double band_level = 0.0;

  bool has_bands() const { return !profit_lo.empty(); }
};

struct OptimalPrice {
  double price = 0.0;
  double profit = 0.0;
  std::size_t index = 0;
};

ProfitCurve profit_curve(const CdfFunction& cdf, double cost, std::span<const double> grid);

// Grid argmax; ties go to the lower price.
OptimalPrice optimal_price(const ProfitCurve& curve);

// Profit curve of the posterior point estimate with pointwise equal-tailed
// quantile bands of (1 - F^(t)(x)) (x - c) across posterior draws.
ProfitCurve profit_intervals(const PosteriorCdf& posterior, double cost, std::span<const double> grid,
                             double level = 0.90);

// Profit actually earned at `price` when valuations follow `truth`.
double true_profit(double price, const CdfFunction& truth, double cost);

// `price,profit_mean,profit_lo,profit_hi`; band columns are empty without bands.
void write_profit_csv(std::ostream& out, const ProfitCurve& curve);

// `price,cdf_mean,cdf_lo,cdf_hi`.
void write_cdf_grid_csv(std::ostream& out, std::span<const CdfGridRow> rows);

}  // namespace ptauction::pricing
