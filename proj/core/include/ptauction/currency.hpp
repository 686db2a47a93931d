#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace ptauction {

// Whole cents. Ingestion and the proxy-bidding simulator work in this unit so
// increment subtraction, sorting and duplicate detection are exact.
class Cents {
 public:
  constexpr Cents() = default;
  constexpr explicit Cents(std::int64_t value) : value_(value) {}

  constexpr std::int64_t value() const { return value_; }
  constexpr double dollars() const { return static_cast<double>(value_) / 100.0; }

  constexpr Cents operator+(Cents other) const { return Cents(value_ + other.value_); }
  constexpr Cents operator-(Cents other) const { return Cents(value_ - other.value_); }
  constexpr auto operator<=>(const Cents&) const = default;

 private:
  std::int64_t value_ = 0;
};

// Parses "12", "12.3" or "12.34" (no sign, no exponent, at most two
// fractional digits). Throws std::invalid_argument otherwise.
Cents parse_dollars(std::string_view text);

// Fixed two-decimal rendering, e.g. Cents(501) -> "5.01".
std::string format_dollars(Cents amount);

// Nearest whole cent; used where a real-valued price must be reported on the
// currency grid.
Cents round_to_cents(double dollars);

}  // namespace ptauction
