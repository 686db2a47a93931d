#include "ptauction/base_measure.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ptauction/currency.hpp"
#include "ptauction/io.hpp"

namespace ptauction {

std::string Interval::to_string() const {
  return std::string(lo_closed ? "[" : "(") + io::fixed(lo, 2) + ", " +
         (bounded() ? io::fixed(hi, 2) : std::string("inf")) + ")";
}

BaseMeasure BaseMeasure::uniform(double y_max) {
  if (!(y_max > 0.0) || !std::isfinite(y_max)) {
    throw std::invalid_argument("uniform base measure needs a positive finite y_max");
  }
  return BaseMeasure(Kind::kUniform, {{0.0, 0.0}, {y_max, 1.0}});
}

BaseMeasure BaseMeasure::piecewise_linear(std::vector<CdfKnot> knots) {
  if (knots.empty()) throw std::invalid_argument("piecewise-linear base measure needs at least one knot");
  double prev_price = 0.0;
  double prev_cdf = 0.0;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto& k = knots[i];
    if (!(k.price > prev_price) || !std::isfinite(k.price)) {
      throw std::invalid_argument("base measure knot prices must be positive and strictly increasing");
    }
    if (!(k.cdf >= prev_cdf) || k.cdf > 1.0) {
      throw std::invalid_argument("base measure CDF values must be non-decreasing within [0, 1]");
    }
    prev_price = k.price;
    prev_cdf = k.cdf;
  }
  if (knots.back().cdf != 1.0) {
    throw std::invalid_argument("base measure must reach CDF 1 at its last knot (bounded support)");
  }
  knots.insert(knots.begin(), CdfKnot{0.0, 0.0});
  return BaseMeasure(Kind::kPiecewiseLinear, std::move(knots));
}

double BaseMeasure::cdf(double y) const {
  if (!(y > 0.0)) return 0.0;
  if (y >= knots_.back().price) return 1.0;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), y,
                                   [](double v, const CdfKnot& k) { return v < k.price; });
  const CdfKnot& b = *it;
  const CdfKnot& a = *(it - 1);
  return a.cdf + (b.cdf - a.cdf) * (y - a.price) / (b.price - a.price);
}

double BaseMeasure::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("quantile level must be in [0, 1]");
  if (u == 0.0) return 0.0;
  // First knot whose CDF reaches u; the answer lies on the segment ending there.
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), u,
                                   [](const CdfKnot& k, double v) { return k.cdf < v; });
  const CdfKnot& b = *it;
  if (b.cdf == u) {
    // Leftmost point of a possible flat stretch at level u.
    auto first = it;
    while (first != knots_.begin() && (first - 1)->cdf == u) --first;
    return first->price;
  }
  const CdfKnot& a = *(it - 1);
  return a.price + (b.price - a.price) * (u - a.cdf) / (b.cdf - a.cdf);
}

double BaseMeasure::measure_of(const Interval& interval) const {
  if (!(interval.lo >= 0.0) || !(interval.hi > interval.lo)) {
    throw std::invalid_argument("measure_of needs 0 <= lo < hi");
  }
  const double upper = interval.bounded() ? cdf(interval.hi) : 1.0;
  return upper - cdf(interval.lo);
}

double BaseMeasure::sample(Rng& rng) const { return quantile(uniform01(rng)); }

std::string BaseMeasure::describe() const {
  if (kind_ == Kind::kUniform) return "uniform(0, " + io::fixed(support_max(), 2) + ")";
  return "piecewise_linear(" + std::to_string(knots_.size() - 1) + " knots, support max " +
         io::fixed(support_max(), 2) + ")";
}

BaseMeasure elicited_cdf(std::span<const ElicitedResponse> responses) {
  if (responses.empty()) throw std::invalid_argument("elicitation needs at least one response");
  std::vector<CdfKnot> knots;
  knots.reserve(responses.size());
  for (std::size_t i = 0; i < responses.size(); ++i) {
    const auto& r = responses[i];
    if (r.percent_willing < 0 || r.percent_willing > 100) {
      throw std::invalid_argument("response " + std::to_string(i + 1) +
                                  ": percent willing must be in [0, 100]");
    }
    if (i > 0 && !(r.price > responses[i - 1].price)) {
      throw std::invalid_argument("response " + std::to_string(i + 1) +
                                  ": elicited prices must be strictly increasing");
    }
    if (i > 0 && r.percent_willing > responses[i - 1].percent_willing) {
      throw std::invalid_argument("response " + std::to_string(i + 1) +
                                  ": percent willing must be non-increasing in price");
    }
    knots.push_back({r.price, 1.0 - r.percent_willing / 100.0});
  }
  if (responses.back().percent_willing != 0) {
    throw std::invalid_argument(
        "the last elicited price must have 0 percent willing so the support is bounded");
  }
  return BaseMeasure::piecewise_linear(std::move(knots));
}

std::vector<ElicitedResponse> read_elicitation_csv(std::istream& in) {
  io::CsvReader reader(in, {"price", "percent_willing"});
  std::vector<ElicitedResponse> out;
  std::vector<std::string> f;
  while (reader.next(f)) {
    ElicitedResponse r;
    try {
      r.price = parse_dollars(f[0]).dollars();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("row " + std::to_string(reader.row_number()) + ": " + e.what());
    }
    const auto& x = f[1];
    const auto [ptr, ec] = std::from_chars(x.data(), x.data() + x.size(), r.percent_willing);
    if (ec != std::errc() || ptr != x.data() + x.size()) {
      throw std::invalid_argument("row " + std::to_string(reader.row_number()) +
                                  ": percent_willing '" + x + "' is not an integer");
    }
    out.push_back(r);
  }
  return out;
}

std::vector<ElicitedResponse> read_elicitation_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open elicitation file '" + path + "'");
  return read_elicitation_csv(in);
}

}  // namespace ptauction
