#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "ptauction/auction.hpp"

namespace ptauction::auction {
namespace {

const std::vector<double> kJewelryY = {10.05, 8.50, 5.51, 5.50, 5.49, 5.12, 4.69, 4.25,
                                      3.73,  3.53, 3.25, 2.34, 2.26, 2.02, 1.50, 1.25};
const std::vector<std::int64_t> kJewelryN = {25, 12, 22, 21, 20, 27, 19, 13, 19, 12, 17, 22, 14, 13, 25, 16};

std::vector<Cents> cents(std::initializer_list<double> dollars) {
  std::vector<Cents> out;
  for (double d : dollars) out.push_back(round_to_cents(d));
  return out;
}

TEST(LoadAuctions, JewelryFileSortsAndSubtractsIncrement) {
  const auto rows = read_auction_csv_file(std::string(PTAUCTION_TEST_DATA_DIR) + "/jewelry_auctions.csv");
  ASSERT_EQ(rows.size(), 16u);
  std::vector<AuctionRow> shuffled(rows.rbegin(), rows.rend());
  const auto ds = load_auctions(shuffled, Cents(1));
  ASSERT_EQ(ds.size(), 16u);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_NEAR(ds.second_highest(i), kJewelryY[i], 1e-12);
    EXPECT_EQ(ds.n_bidders(i), kJewelryN[i]);
  }
  EXPECT_EQ(ds.total_bidders(), std::accumulate(kJewelryN.begin(), kJewelryN.end(), std::int64_t{0}));
}

TEST(LoadAuctions, SingleRowSmallestLegalInput) {
  const std::vector<AuctionRow> rows = {{"1", 2, Cents(501)}};
  const auto ds = load_auctions(rows, Cents(1));
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_DOUBLE_EQ(ds.second_highest(0), 5.00);
}

TEST(LoadAuctions, DuplicateAdjustedPriceIsRejectedWithRow) {
  const std::vector<AuctionRow> rows = {{"a", 3, Cents(301)}, {"b", 4, Cents(999)}, {"c", 5, Cents(301)}};
  try {
    load_auctions(rows, Cents(1));
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_NE(std::string(e.what()).find("3.00"), std::string::npos);
  }
}

TEST(LoadAuctions, RejectsTooFewBiddersAndNonPositivePrices) {
  const std::vector<AuctionRow> one_bidder = {{"a", 3, Cents(301)}, {"b", 1, Cents(500)}};
  try {
    load_auctions(one_bidder, Cents(1));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  const std::vector<AuctionRow> at_increment = {{"a", 3, Cents(1)}};
  EXPECT_THROW(load_auctions(at_increment, Cents(1)), DataError);
  const std::vector<AuctionRow> zero_increment = {{"a", 3, Cents(1)}};
  EXPECT_NO_THROW(load_auctions(zero_increment, Cents(0)));
}

TEST(LoadAuctions, JitterSeparatesTiesDeterministically) {
  const std::vector<AuctionRow> rows = {
      {"a", 3, Cents(301)}, {"b", 4, Cents(301)}, {"c", 5, Cents(301)}, {"d", 6, Cents(700)}};
  TieOptions ties{TiePolicy::kJitter, 17};
  std::vector<TieAdjustment> adj1, adj2;
  const auto d1 = load_auctions(rows, Cents(1), ties, &adj1);
  const auto d2 = load_auctions(rows, Cents(1), ties, &adj2);
  ASSERT_EQ(d1.size(), 4u);
  for (std::size_t i = 1; i < d1.size(); ++i) EXPECT_GT(d1.second_highest(i - 1), d1.second_highest(i));
  for (std::size_t i = 0; i < d1.size(); ++i) {
    EXPECT_EQ(d1.second_highest(i), d2.second_highest(i));
    EXPECT_EQ(d1[i].auction_id, d2[i].auction_id);
  }
  EXPECT_EQ(adj1.size(), 3u);
  for (const auto& a : adj1) {
    EXPECT_DOUBLE_EQ(a.original, 3.00);
    EXPECT_LT(std::abs(a.adjusted - 3.00), 0.005);
  }
}

TEST(ReadAuctionCsv, ReportsRowNumbers) {
  std::istringstream bad_price("auction_id,n_bidders,transaction_price\nx,3,1.00\ny,4,1.234\n");
  try {
    read_auction_csv(bad_price);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
  std::istringstream bad_n("auction_id,n_bidders,transaction_price\nx,three,1.00\n");
  try {
    read_auction_csv(bad_n);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.row(), 1u);
  }
  std::istringstream bad_header("id,n,price\nx,3,1.00\n");
  EXPECT_THROW(read_auction_csv(bad_header), DataError);
}

TEST(ReadAuctionCsv, SerializationRoundTripsCents) {
  const auto rows = read_auction_csv_file(std::string(PTAUCTION_TEST_DATA_DIR) + "/jewelry_auctions.csv");
  const auto ds = load_auctions(rows, Cents(1));
  std::ostringstream out;
  write_auction_csv(out, ds);
  std::istringstream in(out.str());
  const auto again = load_auctions(read_auction_csv(in), Cents(1));
  ASSERT_EQ(again.size(), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    EXPECT_EQ(round_to_cents(again.second_highest(i)), round_to_cents(ds.second_highest(i)));
    EXPECT_EQ(again.n_bidders(i), ds.n_bidders(i));
  }
}

TEST(ProxyAuction, ThreeBidderExampleInArrivalOrder) {
  const auto v = cents({3.0, 5.0, 10.0});
  const auto out = simulate_proxy_auction(v, Cents(1), Cents(1));
  EXPECT_EQ(out.final_price, Cents(501));
  EXPECT_EQ(out.observed_bid_count, 3u);
  ASSERT_TRUE(out.winner_index.has_value());
  EXPECT_EQ(*out.winner_index, 2u);
}

TEST(ProxyAuction, LateLowBidderCannotBid) {
  const auto v = cents({5.0, 10.0, 3.0});  // B, C, A
  const auto out = simulate_proxy_auction(v, Cents(1), Cents(1));
  EXPECT_EQ(out.final_price, Cents(501));
  EXPECT_EQ(out.observed_bid_count, 2u);
  EXPECT_EQ(*out.winner_index, 1u);
}

TEST(ProxyAuction, FourBidderExample) {
  const auto v = cents({3.0, 10.0, 15.0, 5.0});  // A, C, D, B
  const auto out = simulate_proxy_auction(v, Cents(1), Cents(1));
  EXPECT_EQ(out.final_price, Cents(1001));
  EXPECT_EQ(*out.winner_index, 2u);
}

TEST(ProxyAuction, EdgeCases) {
  const auto lone = simulate_proxy_auction(cents({4.0}), Cents(1), Cents(1));
  EXPECT_EQ(lone.final_price, Cents(1));
  EXPECT_EQ(lone.observed_bid_count, 1u);
  const auto nobody = simulate_proxy_auction(cents({0.5, 0.2}), Cents(100), Cents(1));
  EXPECT_EQ(nobody.observed_bid_count, 0u);
  EXPECT_FALSE(nobody.winner_index.has_value());
  // Equal valuations: the earlier arrival keeps the lead.
  const auto tie = simulate_proxy_auction(cents({7.0, 7.0}), Cents(1), Cents(1));
  EXPECT_EQ(*tie.winner_index, 0u);
  EXPECT_EQ(tie.final_price, Cents(701));
  EXPECT_THROW(simulate_proxy_auction(std::vector<Cents>{}, Cents(1), Cents(1)), std::invalid_argument);
}

TEST(ProxyAuction, ArrivalOrderInvarianceProperty) {
  Rng rng = make_rng(2024, {});
  std::uniform_int_distribution<int> size(2, 9);
  std::uniform_int_distribution<std::int64_t> value(2, 5000);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<Cents> v(static_cast<std::size_t>(size(rng)));
    for (auto& c : v) c = Cents(value(rng));
    std::vector<Cents> sorted = v;
    std::sort(sorted.rbegin(), sorted.rend());
    const std::int64_t gap = v.size() > 2 ? (sorted[1] - sorted[2]).value() : 1000;
    if (gap > 0 && gap <= 1) continue;  // documented exception
    const Cents expected = sorted[1] + Cents(1);
    for (int p = 0; p < 10; ++p) {
      std::shuffle(v.begin(), v.end(), rng);
      EXPECT_EQ(simulate_proxy_auction(v, Cents(1), Cents(1)).final_price, expected);
      ++checked;
    }
  }
  EXPECT_GT(checked, 3000);
}

TEST(ProxyAuction, OneIncrementGapCanDependOnOrder) {
  // Second and third valuations one cent apart: when the runner-up arrives
  // after the price reached its valuation it cannot bid.
  const auto early = simulate_proxy_auction(cents({5.01, 5.00, 10.0}), Cents(1), Cents(1));
  const auto late = simulate_proxy_auction(cents({5.00, 10.0, 5.01}), Cents(1), Cents(1));
  EXPECT_EQ(early.final_price, Cents(502));
  EXPECT_EQ(late.final_price, Cents(501));
}

TEST(DrawSecondHighest, PointMass) {
  Rng rng = make_rng(1, {});
  EXPECT_DOUBLE_EQ(draw_second_highest([](Rng&) { return 4.0; }, 2, rng), 4.0);
  EXPECT_THROW(draw_second_highest([](Rng&) { return 4.0; }, 1, rng), std::invalid_argument);
}

TEST(DrawSecondHighest, TwoUniformsFollowOrderStatisticDensity) {
  // Second-highest of 2 uniforms is the minimum: CDF 1 - (1 - y)^2.
  Rng rng = make_rng(7, {});
  const int n = 100000;
  std::vector<double> x(n);
  for (auto& v : x) v = draw_second_highest([](Rng& r) { return uniform01(r); }, 2, rng);
  std::sort(x.begin(), x.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = 1.0 - (1.0 - x[i]) * (1.0 - x[i]);
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
  }
  EXPECT_LT(ks, 1.63 / std::sqrt(static_cast<double>(n)));  // 1% critical value
}

TEST(DrawSecondHighest, TwentyUniformsMean) {
  Rng rng = make_rng(8, {});
  const int n = 100000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += draw_second_highest([](Rng& r) { return uniform01(r); }, 20, rng);
  const double mean = 19.0 / 21.0;
  const double var = 19.0 * 2.0 / (21.0 * 21.0 * 22.0);
  EXPECT_NEAR(s / n, mean, 3 * std::sqrt(var / n));
}

}  // namespace
}  // namespace ptauction::auction
