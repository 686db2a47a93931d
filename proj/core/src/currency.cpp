#include "ptauction/currency.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ptauction {

Cents parse_dollars(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("malformed price '" + std::string(text) +
                                "': expected decimal dollars with at most two fractional digits");
  };
  if (text.empty()) fail();

  std::int64_t whole = 0;
  std::size_t pos = 0;
  std::size_t int_digits = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    if (whole > std::numeric_limits<std::int64_t>::max() / 1000) fail();
    whole = whole * 10 + (text[pos] - '0');
    ++pos;
    ++int_digits;
  }
  std::int64_t frac = 0;
  std::size_t frac_digits = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (frac_digits == 2) fail();
      frac = frac * 10 + (text[pos] - '0');
      ++pos;
      ++frac_digits;
    }
    if (frac_digits == 0) fail();
  }
  if (pos != text.size() || (int_digits == 0 && frac_digits == 0)) fail();
  if (frac_digits == 1) frac *= 10;
  return Cents(whole * 100 + frac);
}

std::string format_dollars(Cents amount) {
  std::int64_t v = amount.value();
  std::string sign;
  if (v < 0) {
    sign = "-";
    v = -v;
  }
  std::string frac = std::to_string(v % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return sign + std::to_string(v / 100) + "." + frac;
}

Cents round_to_cents(double dollars) {
  return Cents(static_cast<std::int64_t>(std::llround(dollars * 100.0)));
}

}  // namespace ptauction
