#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ptauction/random.hpp"

namespace ptauction {

// Interval of the valuation axis. `hi` may be +infinity. Openness of the
// endpoints is recorded for display only; every base measure here is
// continuous, so it never changes a measure.
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = false;

  bool bounded() const { return hi < std::numeric_limits<double>::infinity(); }
  bool contains(double x) const { return (lo_closed ? x >= lo : x > lo) && x < hi; }
  std::string to_string() const;
};

struct CdfKnot {
  double price = 0.0;
  double cdf = 0.0;
};

// One survey statement: "if the price is set at Y dollars, X out of 100
// consumers are willing to buy".
struct ElicitedResponse {
  double price = 0.0;
  int percent_willing = 0;
};

// Continuous base measure H on [0, support_max()]: a piecewise-linear CDF
// through (0, 0) and the stored knots, equal to 1 beyond the last knot.
class BaseMeasure {
 public:
  enum class Kind { kUniform, kPiecewiseLinear };

  // H(y) = min(y / y_max, 1).
  static BaseMeasure uniform(double y_max = 20.0);

  // Knots must have strictly increasing positive prices, non-decreasing CDF
  // values in [0, 1], and end at CDF 1. (0, 0) is prepended.
  static BaseMeasure piecewise_linear(std::vector<CdfKnot> knots);

  Kind kind() const { return kind_; }
  double support_max() const { return knots_.back().price; }
  std::span<const CdfKnot> knots() const { return knots_; }

  double cdf(double y) const;

  // Generalized inverse inf{y : H(y) >= u}; u in [0, 1].
  double quantile(double u) const;

  // H(hi) - H(lo), with H(+inf) = 1.
  double measure_of(const Interval& interval) const;

  double sample(Rng& rng) const;

  std::string describe() const;

 private:
  BaseMeasure(Kind kind, std::vector<CdfKnot> knots) : kind_(kind), knots_(std::move(knots)) {}

  Kind kind_;
  std::vector<CdfKnot> knots_;  // knots_[0] == (0, 0)
};

// Subjective-CDF construction: H(Y_j) = 1 - X_j / 100 joined by line
// segments, anchored at (0, 0). Requires strictly increasing prices,
// non-increasing X and a final X of 0; throws std::invalid_argument otherwise.
BaseMeasure elicited_cdf(std::span<const ElicitedResponse> responses);

// CSV with header `price,percent_willing`.
std::vector<ElicitedResponse> read_elicitation_csv(std::istream& in);
std::vector<ElicitedResponse> read_elicitation_csv_file(const std::string& path);

}  // namespace ptauction
