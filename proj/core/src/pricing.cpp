#include "ptauction/pricing.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ptauction/io.hpp"

namespace ptauction::pricing {

std::vector<double> price_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(hi >= lo)) throw std::invalid_argument("grid upper bound below lower bound");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

ProfitCurve profit_curve(const CdfFunction& cdf, double cost, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("profit curve needs a non-empty price grid");
  if (!(cost >= 0.0)) throw std::invalid_argument("unit cost must be non-negative");
  ProfitCurve curve;
  curve.cost = cost;
  curve.price.assign(grid.begin(), grid.end());
  curve.profit.reserve(grid.size());
  for (double x : grid) curve.profit.push_back((1.0 - cdf(x)) * (x - cost));
  return curve;
}

OptimalPrice optimal_price(const ProfitCurve& curve) {
  if (curve.profit.empty()) throw std::invalid_argument("optimal price of an empty profit curve");
  OptimalPrice best{curve.price[0], curve.profit[0], 0};
  for (std::size_t i = 1; i < curve.profit.size(); ++i) {
    if (curve.profit[i] > best.profit) best = {curve.price[i], curve.profit[i], i};
  }
  return best;
}

ProfitCurve profit_intervals(const PosteriorCdf& posterior, double cost, std::span<const double> grid,
                             double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("band level must be in (0, 1)");
  if (posterior.draw_count() < 2) throw std::invalid_argument("profit intervals need at least two posterior draws");
  ProfitCurve curve = profit_curve([&](double x) { return posterior.mean_cdf(x); }, cost, grid);
  curve.band_level = level;
  curve.profit_lo.reserve(grid.size());
  curve.profit_hi.reserve(grid.size());
  const double tail = (1.0 - level) / 2.0;
  std::vector<double> values;
  for (double x : grid) {
    posterior.cdf_draws(x, values);
    for (double& f : values) f = (1.0 - f) * (x - cost);
    // Quantiles of the profit are taken directly so bands stay ordered when
    // x < c flips the sign of (x - c).
    curve.profit_lo.push_back(sample_quantile(values, tail));
    curve.profit_hi.push_back(sample_quantile(values, 1.0 - tail));
  }
  return curve;
}

double true_profit(double price, const CdfFunction& truth, double cost) {
  return (1.0 - truth(price)) * (price - cost);
}

void write_profit_csv(std::ostream& out, const ProfitCurve& curve) {
  out << "price,profit_mean,profit_lo,profit_hi\n";
  for (std::size_t i = 0; i < curve.price.size(); ++i) {
    out << io::fixed(curve.price[i], 2) << ',' << io::fixed(curve.profit[i], 6) << ',';
    if (curve.has_bands()) out << io::fixed(curve.profit_lo[i], 6) << ',' << io::fixed(curve.profit_hi[i], 6);
    else out << ',';
    out << '\n';
  }
}

void write_cdf_grid_csv(std::ostream& out, std::span<const CdfGridRow> rows) {
  out << "price,cdf_mean,cdf_lo,cdf_hi\n";
  for (const auto& r : rows) {
    out << io::fixed(r.price, 2) << ',' << io::fixed(r.mean, 6) << ',' << io::fixed(r.lo, 6) << ','
        << io::fixed(r.hi, 6) << '\n';
  }
}

}  // namespace ptauction::pricing
