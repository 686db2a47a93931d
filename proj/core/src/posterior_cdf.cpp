#include "ptauction/posterior_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ptauction {

double sample_quantile(std::span<double> values, double level) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(level >= 0.0 && level <= 1.0)) throw std::invalid_argument("quantile level must be in [0, 1]");
  const double h = level * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double a = values[lo];
  if (frac == 0.0 || lo + 1 >= values.size()) return a;
  const double b = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
  return a + frac * (b - a);
}

std::vector<CdfGridRow> summarize_cdf(const PosteriorCdf& posterior, std::span<const double> grid,
                                      double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("band level must be in (0, 1)");
  const double tail = (1.0 - level) / 2.0;
  std::vector<CdfGridRow> rows;
  rows.reserve(grid.size());
  std::vector<double> draws;
  for (double x : grid) {
    CdfGridRow row{x, posterior.mean_cdf(x), 0.0, 0.0};
    posterior.cdf_draws(x, draws);
    if (draws.empty()) {
      row.lo = row.hi = row.mean;
    } else {
      row.lo = sample_quantile(draws, tail);
      row.hi = sample_quantile(draws, 1.0 - tail);
    }
    rows.push_back(row);
  }
  return rows;
}

double posterior_median(const PosteriorCdf& posterior, double lo, double hi, double tol) {
  if (!(hi > lo)) throw std::invalid_argument("median search needs lo < hi");
  if (posterior.mean_cdf(hi) < 0.5) return hi;
  if (posterior.mean_cdf(lo) >= 0.5) return lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (posterior.mean_cdf(mid) >= 0.5) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace ptauction
