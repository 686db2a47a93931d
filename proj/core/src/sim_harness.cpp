#include "ptauction/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ptauction/base_measure.hpp"
#include "ptauction/io.hpp"
#include "ptauction/parametric.hpp"
#include "ptauction/pricing.hpp"

namespace ptauction::sim {
namespace {

// FNV-1a, for stable per-truth stream identifiers.
std::uint64_t stable_hash(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

Truth Truth::gamma(double shape, double rate) {
  const parametric::ParametricModel model(parametric::Family::kGamma, {shape, rate});
  return Truth(
      "gamma", [model](double x) { return model.cdf(x); }, [model](Rng& rng) { return model.sample(rng); });
}

Truth Truth::mixture() {
  const parametric::ParametricModel g(parametric::Family::kGamma, {0.32, 0.26});
  const parametric::ParametricModel n(parametric::Family::kTruncatedNormal, {5.0, 1.0});
  return Truth(
      "mixture", [g, n](double x) { return 0.5 * g.cdf(x) + 0.5 * n.cdf(x); },
      [g, n](Rng& rng) { return uniform01(rng) < 0.5 ? g.sample(rng) : n.sample(rng); });
}

Truth Truth::uniform(double lo, double hi) {
  if (!(hi > lo) || !(lo >= 0.0)) throw std::invalid_argument("uniform truth needs 0 <= lo < hi");
  return Truth(
      "uniform", [lo, hi](double x) { return std::clamp((x - lo) / (hi - lo), 0.0, 1.0); },
      [lo, hi](Rng& rng) { return lo + (hi - lo) * uniform01(rng); });
}

Truth Truth::point_mass(double value) {
  if (!(value > 0.0)) throw std::invalid_argument("point-mass truth must be positive");
  return Truth(
      "point_mass", [value](double x) { return x >= value ? 1.0 : 0.0; }, [value](Rng&) { return value; });
}

Truth Truth::parse(const std::string& name) {
  if (name == "gamma") return gamma();
  if (name == "mixture") return mixture();
  if (name == "uniform") return uniform();
  throw std::invalid_argument("unknown truth '" + name + "' (gamma | mixture | uniform)");
}

Optimum true_optimum(const Truth& truth, double cost, double hi, double step) {
  const auto grid = pricing::price_grid(cost, hi, step);
  const auto curve = pricing::profit_curve([&](double x) { return truth.cdf(x); }, cost, grid);
  const auto best = pricing::optimal_price(curve);
  return {best.price, best.profit};
}

auction::AuctionDataset generate_replication(const Truth& truth, int auctions, double bidder_mean, Rng& rng,
                                             const auction::TieOptions& ties) {
  if (auctions < 1) throw std::invalid_argument("a replication needs at least one auction");
  if (!(bidder_mean > 0.0)) throw std::invalid_argument("bidder mean must be positive");
  std::poisson_distribution<std::int64_t> poisson(bidder_mean);
  std::vector<auction::AuctionObservation> obs;
  obs.reserve(static_cast<std::size_t>(auctions));
  for (int i = 0; i < auctions; ++i) {
    std::int64_t n = 0;
    do {
      n = poisson(rng);
    } while (n < 2);
    const double y = auction::draw_second_highest([&](Rng& r) { return truth.sample(r); }, n, rng);
    obs.push_back({"sim-" + std::to_string(i + 1), n, y});
  }
  return auction::AuctionDataset::from_observations(std::move(obs), Cents(1), ties);
}

std::string method_name(Method method) {
  switch (method) {
    case Method::kPolyaTree: return "polya_tree";
    case Method::kGamma: return "gamma";
    case Method::kTruncatedNormal: return "truncated_normal";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "pt" || name == "polya_tree" || name == "polya-tree") return Method::kPolyaTree;
  if (name == "gamma") return Method::kGamma;
  if (name == "tn" || name == "truncated_normal" || name == "truncated-normal") return Method::kTruncatedNormal;
  throw std::invalid_argument("unknown method '" + name + "' (pt | gamma | tn)");
}

StudyConfig full_study_config() {
  StudyConfig c;
  c.auction_counts = {1000, 100, 16};
  c.replications = 100;  // M = 1,000 is capped at 10 inside run_study
  c.gibbs_burn_in = 1000;
  c.gibbs_draws = 10000;
  c.mh_iterations = 60000;
  c.mh_burn_in = 10000;
  c.mh_cdf_draws = 2000;
  return c;
}

double estimate_price(Method method, const auction::AuctionDataset& dataset, const StudyConfig& config,
                      std::uint64_t seed) {
  const auto grid = pricing::price_grid(config.cost, config.y_max, config.grid_step);
  if (method == Method::kPolyaTree) {
    const auto base = BaseMeasure::uniform(config.y_max);
    const auto partition = pt::build_partition(dataset);
    const auto hyper = pt::init_hyperparams(partition, base, pt::quadratic_depth_weight(config.k));
    pt::GibbsConfig gc;
    gc.burn_in = config.gibbs_burn_in;
    gc.draws = config.gibbs_draws;
    gc.seed = seed;
    gc.keep_conditionals = false;
    const auto gibbs = pt::run_gibbs(dataset, hyper, gc);
    pt::EstimateOptions eo;
    eo.band_source = pt::BandSource::kRaoBlackwell;
    eo.interpolation = config.interpolation;
    const auto est = pt::estimate_cdf(gibbs, hyper, partition, base, eo);
    const auto curve = pricing::profit_curve([&](double x) { return est.mean_cdf(x); }, config.cost, grid);
    return pricing::optimal_price(curve).price;
  }
  const auto family = method == Method::kGamma ? parametric::Family::kGamma : parametric::Family::kTruncatedNormal;
  auto mh = parametric::default_mh_config(family);
  mh.iterations = config.mh_iterations;
  mh.burn_in = config.mh_burn_in;
  mh.seed = seed;
  const auto chain = parametric::fit_mh(family, dataset, mh);
  const auto posterior = parametric::ParametricPosterior::from_chain(chain, config.mh_cdf_draws);
  const auto curve = pricing::profit_curve([&](double x) { return posterior.mean_cdf(x); }, config.cost, grid);
  return pricing::optimal_price(curve).price;
}

const StudyRow& StudyResult::row(const std::string& truth, int auctions, Method method) const {
  for (const auto& r : rows) {
    if (r.truth == truth && r.auctions == auctions && r.method == method) return r;
  }
  throw std::out_of_range("no study row for " + truth + ", M = " + std::to_string(auctions) + ", " +
                          method_name(method));
}

StudyResult run_study(const StudyConfig& config) {
  if (config.replications < 1) throw std::invalid_argument("study needs at least one replication");
  if (config.auction_counts.empty() || config.truths.empty() || config.methods.empty()) {
    throw std::invalid_argument("study needs at least one truth, auction count and method");
  }
  for (int m : config.auction_counts) {
    if (m < 1) throw std::invalid_argument("auction counts must be >= 1");
  }

  struct Task {
    std::size_t truth;
    int auctions;
    int rep;
  };
  std::vector<Truth> truths;
  for (const auto& name : config.truths) truths.push_back(Truth::parse(name));
  std::vector<Task> tasks;
  for (std::size_t t = 0; t < truths.size(); ++t) {
    for (int m : config.auction_counts) {
      // The largest case runs only ten times.
      const int reps = m >= 1000 ? std::min(config.replications, 10) : config.replications;
      for (int r = 0; r < reps; ++r) tasks.push_back({t, m, r});
    }
  }

  const std::size_t n_methods = config.methods.size();
  std::vector<ReplicationResult> results(tasks.size() * n_methods);
  auto run_task = [&](std::size_t idx) {
    const Task& task = tasks[idx];
    const Truth& truth = truths[task.truth];
    const std::uint64_t truth_id = stable_hash(truth.name());
    Rng data_rng = make_rng(config.seed, {truth_id, static_cast<std::uint64_t>(task.auctions),
                                          static_cast<std::uint64_t>(task.rep), 0});
    std::optional<auction::AuctionDataset> dataset;
    std::string data_error;
    try {
      dataset = generate_replication(truth, task.auctions, config.bidder_mean, data_rng, config.ties);
    } catch (const std::exception& e) {
      data_error = e.what();
    }
    for (std::size_t k = 0; k < n_methods; ++k) {
      ReplicationResult& r = results[idx * n_methods + k];
      r.truth = truth.name();
      r.auctions = task.auctions;
      r.replication = task.rep;
      r.method = config.methods[k];
      if (!dataset) {
        r.error = data_error;
        continue;
      }
      Rng seed_rng = make_rng(config.seed, {truth_id, static_cast<std::uint64_t>(task.auctions),
                                            static_cast<std::uint64_t>(task.rep),
                                            1 + static_cast<std::uint64_t>(config.methods[k])});
      try {
        r.price = estimate_price(config.methods[k], *dataset, config, seed_rng());
        r.true_profit = pricing::true_profit(r.price, [&](double x) { return truth.cdf(x); }, config.cost);
        r.ok = true;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };

  const unsigned threads = std::max(1u, config.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) run_task(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  StudyResult out;
  out.replications = results;
  for (std::size_t t = 0; t < truths.size(); ++t) {
    const Optimum best = true_optimum(truths[t], config.cost);
    for (int m : config.auction_counts) {
      for (Method method : config.methods) {
        StudyRow row;
        row.truth = truths[t].name();
        row.auctions = m;
        row.method = method;
        row.optimal_price = best.price;
        row.optimal_profit_cents = 100.0 * best.profit;
        std::vector<double> prices;
        std::vector<double> profits;
        for (const auto& r : results) {
          if (r.truth != row.truth || r.auctions != m || r.method != method) continue;
          if (r.ok) {
            prices.push_back(r.price);
            profits.push_back(100.0 * r.true_profit);
          } else {
            ++row.failures;
          }
        }
        row.completed = static_cast<int>(prices.size());
        row.price_mean = mean_of(prices);
        row.price_se = standard_error(prices);
        row.profit_mean_cents = mean_of(profits);
        row.profit_se_cents = standard_error(profits);
        row.percent_loss = row.completed > 0
                               ? 100.0 * (row.profit_mean_cents - row.optimal_profit_cents) / row.optimal_profit_cents
                               : std::numeric_limits<double>::quiet_NaN();
        out.rows.push_back(row);
      }
    }
  }
  return out;
}

void write_results_csv(std::ostream& out, const StudyResult& result) {
  out << "truth,M,method,reps,failures,price_mean,price_se,profit_cents_mean,profit_cents_se,optimal_price,"
         "optimal_profit_cents\n";
  for (const auto& r : result.rows) {
    out << r.truth << ',' << r.auctions << ',' << method_name(r.method) << ',' << r.completed << ','
        << r.failures << ',' << io::fixed(r.price_mean, 4) << ',' << io::fixed(r.price_se, 4) << ','
        << io::fixed(r.profit_mean_cents, 4) << ',' << io::fixed(r.profit_se_cents, 4) << ','
        << io::fixed(r.optimal_price, 3) << ',' << io::fixed(r.optimal_profit_cents, 4) << '\n';
  }
}

void write_percent_loss_csv(std::ostream& out, const StudyResult& result) {
  out << "truth,M,method,percent_loss\n";
  for (const auto& r : result.rows) {
    out << r.truth << ',' << r.auctions << ',' << method_name(r.method) << ',' << io::fixed(r.percent_loss, 2)
        << '\n';
  }
}

void write_replications_csv(std::ostream& out, const StudyResult& result) {
  out << "truth,M,replication,method,ok,price,true_profit_cents,error\n";
  for (const auto& r : result.replications) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    out << r.truth << ',' << r.auctions << ',' << r.replication << ',' << method_name(r.method) << ','
        << (r.ok ? 1 : 0) << ',' << io::fixed(r.price, 4) << ',' << io::fixed(100.0 * r.true_profit, 4) << ','
        << err << '\n';
  }
}

}  // namespace ptauction::sim
