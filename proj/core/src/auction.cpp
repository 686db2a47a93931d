#include "ptauction/auction.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include "ptauction/io.hpp"

namespace ptauction::auction {
namespace {

constexpr double kHalfCent = 0.005;

void sort_descending(std::vector<AuctionObservation>& obs) {
  std::stable_sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) {
    return a.second_highest > b.second_highest;
  });
}

// Spreads each run of equal values over distinct offsets strictly inside
// (-half cent, +half cent). A seeded shuffle decides which auction gets which
// offset, so the result does not depend on input row order alone.
void jitter_ties(std::vector<AuctionObservation>& obs, std::uint64_t seed,
                 std::vector<TieAdjustment>* adjustments) {
  Rng rng = make_rng(seed, {0x7469657300ull});
  std::size_t i = 0;
  while (i < obs.size()) {
    std::size_t j = i + 1;
    while (j < obs.size() && obs[j].second_highest == obs[i].second_highest) ++j;
    const std::size_t k = j - i;
    if (k > 1) {
      std::vector<std::size_t> slot(k);
      std::iota(slot.begin(), slot.end(), 0);
      std::shuffle(slot.begin(), slot.end(), rng);
      for (std::size_t r = 0; r < k; ++r) {
        auto& o = obs[i + r];
        const double offset =
            -kHalfCent + 2.0 * kHalfCent * (static_cast<double>(slot[r]) + 0.5) / static_cast<double>(k);
        const double original = o.second_highest;
        o.second_highest = original + offset;
        if (adjustments) adjustments->push_back({o.auction_id, original, o.second_highest});
      }
    }
    i = j;
  }
  sort_descending(obs);
}

}  // namespace

DataError::DataError(const std::string& what, std::size_t row)
    : std::runtime_error(row ? "row " + std::to_string(row) + ": " + what : what), row_(row) {}

std::int64_t AuctionDataset::total_bidders() const {
  std::int64_t total = 0;
  for (const auto& o : observations_) total += o.n_bidders;
  return total;
}

AuctionDataset AuctionDataset::from_observations(std::vector<AuctionObservation> observations,
                                                 Cents increment, const TieOptions& ties,
                                                 std::vector<TieAdjustment>* adjustments) {
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const auto& o = observations[i];
    if (o.n_bidders < 2) {
      throw DataError("auction '" + o.auction_id + "' has n_bidders = " + std::to_string(o.n_bidders) +
                          "; the second-highest valuation needs at least 2 bidders",
                      i + 1);
    }
    if (!(o.second_highest > 0.0) || !std::isfinite(o.second_highest)) {
      throw DataError("auction '" + o.auction_id + "' has a non-positive second-highest valuation",
                      i + 1);
    }
  }
  sort_descending(observations);

  for (std::size_t i = 1; i < observations.size(); ++i) {
    if (observations[i].second_highest != observations[i - 1].second_highest) continue;
    if (ties.policy == TiePolicy::kReject) {
      throw DataError("auctions '" + observations[i - 1].auction_id + "' and '" +
                      observations[i].auction_id + "' share the second-highest value " +
                      io::fixed(observations[i].second_highest, 4) +
                      "; partition cutpoints must be distinct (use tie jitter to perturb)");
    }
    jitter_ties(observations, ties.seed, adjustments);
    for (std::size_t r = 1; r < observations.size(); ++r) {
      if (observations[r].second_highest == observations[r - 1].second_highest) {
        throw DataError("tie jitter could not separate duplicate second-highest values");
      }
    }
    break;
  }

  AuctionDataset ds;
  ds.observations_ = std::move(observations);
  ds.increment_ = increment;
  return ds;
}

AuctionDataset load_auctions(std::span<const AuctionRow> rows, Cents increment, const TieOptions& ties,
                             std::vector<TieAdjustment>* adjustments) {
  if (increment < Cents(0)) throw std::invalid_argument("increment must be non-negative");
  std::vector<AuctionObservation> obs;
  obs.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.n_bidders < 2) {
      throw DataError("auction '" + r.auction_id + "' has n_bidders = " + std::to_string(r.n_bidders) +
                          "; the second-highest valuation needs at least 2 bidders",
                      i + 1);
    }
    if (r.transaction_price <= increment) {
      throw DataError("auction '" + r.auction_id + "' has transaction price " +
                          format_dollars(r.transaction_price) + " not above the increment " +
                          format_dollars(increment),
                      i + 1);
    }
    obs.push_back({r.auction_id, r.n_bidders, (r.transaction_price - increment).dollars()});
  }
  // Duplicates are detected on exact cents before conversion to dollars.
  if (ties.policy == TiePolicy::kReject) {
    std::vector<std::pair<Cents, std::size_t>> adjusted;
    adjusted.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      adjusted.emplace_back(rows[i].transaction_price - increment, i);
    }
    std::sort(adjusted.begin(), adjusted.end());
    for (std::size_t i = 1; i < adjusted.size(); ++i) {
      if (adjusted[i].first == adjusted[i - 1].first) {
        const auto row = std::max(adjusted[i].second, adjusted[i - 1].second) + 1;
        throw DataError("duplicate adjusted price " + format_dollars(adjusted[i].first) +
                            " (auctions '" + rows[adjusted[i - 1].second].auction_id + "' and '" +
                            rows[adjusted[i].second].auction_id +
                            "'); partition cutpoints must be distinct",
                        row);
      }
    }
  }
  return AuctionDataset::from_observations(std::move(obs), increment, ties, adjustments);
}

std::vector<AuctionRow> read_auction_csv(std::istream& in) {
  io::CsvReader reader = [&] {
    try {
      return io::CsvReader(in, {"auction_id", "n_bidders", "transaction_price"});
    } catch (const std::runtime_error& e) {
      throw DataError(e.what());
    }
  }();
  std::vector<AuctionRow> rows;
  std::vector<std::string> f;
  while (true) {
    try {
      if (!reader.next(f)) break;
    } catch (const std::runtime_error& e) {
      throw DataError(e.what());
    }
    AuctionRow row;
    row.auction_id = f[0];
    const auto& n = f[1];
    const auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), row.n_bidders);
    if (ec != std::errc() || ptr != n.data() + n.size()) {
      throw DataError("n_bidders '" + n + "' is not an integer", reader.row_number());
    }
    try {
      row.transaction_price = parse_dollars(f[2]);
    } catch (const std::invalid_argument& e) {
      throw DataError(e.what(), reader.row_number());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<AuctionRow> read_auction_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open auctions file '" + path + "'");
  return read_auction_csv(in);
}

void write_auction_csv(std::ostream& out, const AuctionDataset& dataset) {
  out << "auction_id,n_bidders,transaction_price\n";
  for (const auto& o : dataset.observations()) {
    const double price = o.second_highest + dataset.increment().dollars();
    out << o.auction_id << ',' << o.n_bidders << ',' << io::fixed(price, 2) << '\n';
  }
}

AuctionOutcome simulate_proxy_auction(std::span<const Cents> valuations, Cents start_price,
                                      Cents increment) {
  if (valuations.empty()) throw std::invalid_argument("proxy auction needs at least one bidder");
  if (start_price < Cents(0)) throw std::invalid_argument("start price must be non-negative");

  AuctionOutcome out;
  out.final_price = start_price;
  std::optional<Cents> leader_max;
  std::optional<Cents> runner_up_max;
  for (std::size_t j = 0; j < valuations.size(); ++j) {
    const Cents v = valuations[j];
    if (!(v > out.final_price)) continue;  // priced out: unobserved bidder
    ++out.observed_bid_count;
    if (!leader_max) {
      leader_max = v;
      out.winner_index = j;
      continue;  // a lone standing bid leaves the price at the start
    }
    if (v > *leader_max) {
      runner_up_max = leader_max;
      leader_max = v;
      out.winner_index = j;
    } else if (!runner_up_max || v > *runner_up_max) {
      runner_up_max = v;
    }
    out.final_price = *runner_up_max + increment;
  }
  return out;
}

}  // namespace ptauction::auction
