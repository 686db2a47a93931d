#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ptauction {

// A posterior over valuation CDFs that can be evaluated pointwise: the point
// estimate F-hat(x) and the per-draw values F^(t)(x) used for bands.
class PosteriorCdf {
 public:
  virtual ~PosteriorCdf() = default;

  virtual double mean_cdf(double x) const = 0;
  virtual std::size_t draw_count() const = 0;
  // Fills `out` (resized to draw_count()) with F^(t)(x) for every draw.
  virtual void cdf_draws(double x, std::vector<double>& out) const = 0;
};

// Type-7 (linear interpolation) sample quantile; reorders `values`.
double sample_quantile(std::span<double> values, double level);

// Pointwise summary of a posterior CDF on a price grid.
struct CdfGridRow {
  double price = 0.0;
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// Mean CDF plus equal-tailed pointwise bands at `level` (e.g. 0.90 gives the
// 5% and 95% quantiles).
std::vector<CdfGridRow> summarize_cdf(const PosteriorCdf& posterior, std::span<const double> grid,
                                      double level = 0.90);

// Smallest x in [lo, hi] with mean_cdf(x) >= 0.5, by bisection to `tol`.
double posterior_median(const PosteriorCdf& posterior, double lo, double hi, double tol = 1e-6);

}  // namespace ptauction
