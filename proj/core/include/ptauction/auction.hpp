#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ptauction/currency.hpp"
#include "ptauction/random.hpp"

namespace ptauction::auction {

// Raised for invalid auction input. `row()` is the 1-based data row (header
// excluded) when the problem can be traced to one, 0 otherwise.
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what, std::size_t row = 0);
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// One line of the auctions CSV, before increment adjustment.
struct AuctionRow {
  std::string auction_id;
  std::int64_t n_bidders = 0;
  Cents transaction_price;
};

struct AuctionObservation {
  std::string auction_id;
  std::int64_t n_bidders = 0;  // observed and unobserved viewers
  double second_highest = 0;   // dollars
};

enum class TiePolicy {
  kReject,  // duplicate second-highest values are an error
  kJitter,  // spread duplicates deterministically within +/- half a cent
};

struct TieAdjustment {
  std::string auction_id;
  double original = 0;
  double adjusted = 0;
};

struct TieOptions {
  TiePolicy policy = TiePolicy::kReject;
  std::uint64_t seed = 0;
};

// M auctions sorted strictly descending by second-highest valuation:
// observation(0) holds y_12, the largest.
class AuctionDataset {
 public:
  AuctionDataset() = default;

  // Validates n_bidders >= 2 and second_highest > 0, sorts descending and
  // applies the tie policy. Adjustments made by kJitter are appended to
  // `adjustments` when non-null.
  static AuctionDataset from_observations(std::vector<AuctionObservation> observations,
                                          Cents increment = Cents(1),
                                          const TieOptions& ties = {},
                                          std::vector<TieAdjustment>* adjustments = nullptr);

  std::size_t size() const { return observations_.size(); }
  bool empty() const { return observations_.empty(); }
  const AuctionObservation& operator[](std::size_t i) const { return observations_[i]; }
  std::span<const AuctionObservation> observations() const { return observations_; }
  Cents increment() const { return increment_; }

  // Convenience accessors using 0-based sorted position.
  double second_highest(std::size_t i) const { return observations_[i].second_highest; }
  std::int64_t n_bidders(std::size_t i) const { return observations_[i].n_bidders; }
  std::int64_t total_bidders() const;

 private:
  std::vector<AuctionObservation> observations_;
  Cents increment_{1};
};

// Subtracts the increment from each transaction price and builds the sorted
// dataset. Errors carry the offending row number.
AuctionDataset load_auctions(std::span<const AuctionRow> rows, Cents increment = Cents(1),
                             const TieOptions& ties = {},
                             std::vector<TieAdjustment>* adjustments = nullptr);

// CSV with header `auction_id,n_bidders,transaction_price`.
std::vector<AuctionRow> read_auction_csv(std::istream& in);
std::vector<AuctionRow> read_auction_csv_file(const std::string& path);

// Writes the dataset back as transaction prices (second_highest + increment),
// in sorted order. Cent-valued datasets round-trip exactly.
void write_auction_csv(std::ostream& out, const AuctionDataset& dataset);

struct AuctionOutcome {
  Cents final_price;
  std::size_t observed_bid_count = 0;
  std::optional<std::size_t> winner_index;  // arrival position of the winner
};

// Replays eBay-style proxy bidding. A bidder places their valuation as
// maximum bid only when it strictly exceeds the current price; with two or
// more standing bids the price is the second-highest standing maximum plus
// the increment. Ties keep the earlier arrival in the lead.
//
// The final price equals the second-highest valuation plus the increment for
// every arrival order provided the top two valuations exceed start_price and
// the gap between the second- and third-highest valuation is not in
// (0, increment]. At exactly one increment the price can reach the second
// valuation before that bidder arrives, and the strict-inequality rule keeps
// them out.
AuctionOutcome simulate_proxy_auction(std::span<const Cents> valuations_in_arrival_order,
                                      Cents start_price, Cents increment);

// Second-largest of n independent draws from `sampler`.
template <class Sampler>
double draw_second_highest(Sampler&& sampler, std::int64_t n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("second-highest value needs at least two draws");
  double first = sampler(rng);
  double second = sampler(rng);
  if (second > first) std::swap(first, second);
  for (std::int64_t j = 2; j < n; ++j) {
    const double v = sampler(rng);
    if (v > first) {
      second = first;
      first = v;
    } else if (v > second) {
      second = v;
    }
  }
  return second;
}

}  // namespace ptauction::auction
