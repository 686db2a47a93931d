#include <gtest/gtest.h>

#include <stdexcept>

#include "ptauction/currency.hpp"

namespace ptauction {
namespace {

TEST(Currency, ParsesWholeAndFractionalDollars) {
  EXPECT_EQ(parse_dollars("12").value(), 1200);
  EXPECT_EQ(parse_dollars("12.3").value(), 1230);
  EXPECT_EQ(parse_dollars("12.34").value(), 1234);
  EXPECT_EQ(parse_dollars("0.01").value(), 1);
  EXPECT_EQ(parse_dollars("0").value(), 0);
}

TEST(Currency, RejectsMalformedAmounts) {
  for (const char* bad : {"", "1.234", "-1.00", "+1", "1e3", "abc", "1.", ".5x", "1,00", " 1.00"}) {
    EXPECT_THROW(parse_dollars(bad), std::invalid_argument) << bad;
  }
}

TEST(Currency, FormatRoundTrip) {
  for (std::int64_t c : {0, 1, 9, 10, 99, 100, 501, 1005, 123456789}) {
    EXPECT_EQ(parse_dollars(format_dollars(Cents(c))).value(), c);
  }
  EXPECT_EQ(format_dollars(Cents(501)), "5.01");
  EXPECT_EQ(format_dollars(Cents(7)), "0.07");
}

TEST(Currency, RoundToCents) {
  EXPECT_EQ(round_to_cents(5.004).value(), 500);
  EXPECT_EQ(round_to_cents(5.006).value(), 501);
  EXPECT_EQ(round_to_cents(10.05).value(), 1005);
}

TEST(Currency, Arithmetic) {
  EXPECT_EQ((Cents(1006) - Cents(1)).value(), 1005);
  EXPECT_LT(Cents(3), Cents(4));
  EXPECT_DOUBLE_EQ(Cents(1005).dollars(), 10.05);
}

}  // namespace
}  // namespace ptauction
