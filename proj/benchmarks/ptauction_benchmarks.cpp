#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ptauction/auction.hpp"
#include "ptauction/base_measure.hpp"
#include "ptauction/parametric.hpp"
#include "ptauction/polya_tree.hpp"
#include "ptauction/pricing.hpp"

namespace {

using namespace ptauction;

auction::AuctionDataset simulated(int auctions) {
  Rng rng = make_rng(17, {});
  std::poisson_distribution<std::int64_t> pois(18.5);
  std::uniform_real_distribution<double> value(2.3, 6.3);
  std::vector<auction::AuctionObservation> obs;
  for (int i = 0; i < auctions; ++i) {
    std::int64_t n;
    do n = pois(rng);
    while (n < 2);
    obs.push_back({std::to_string(i), n, auction::draw_second_highest([&](Rng& r) { return value(r); }, n, rng)});
  }
  return auction::AuctionDataset::from_observations(std::move(obs));
}

void BM_GibbsSweeps(benchmark::State& state) {
  const auto ds = simulated(static_cast<int>(state.range(0)));
  const auto p = pt::build_partition(ds);
  const auto h = pt::init_hyperparams(p, BaseMeasure::uniform(20.0), pt::quadratic_depth_weight(pt::kTinyStrength));
  pt::GibbsConfig cfg;
  cfg.burn_in = 0;
  cfg.draws = 100;
  for (auto _ : state) benchmark::DoNotOptimize(pt::run_gibbs(ds, h, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.draws);
}
BENCHMARK(BM_GibbsSweeps)->Arg(16)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_EstimateCdf(benchmark::State& state) {
  const auto ds = simulated(static_cast<int>(state.range(0)));
  const auto p = pt::build_partition(ds);
  const auto base = BaseMeasure::uniform(20.0);
  const auto h = pt::init_hyperparams(p, base, pt::quadratic_depth_weight(pt::kTinyStrength));
  pt::GibbsConfig cfg;
  cfg.burn_in = 0;
  cfg.draws = 1000;
  const auto g = pt::run_gibbs(ds, h, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(pt::estimate_cdf(g, h, p, base));
}
BENCHMARK(BM_EstimateCdf)->Arg(16)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_OrderStatLogLik(benchmark::State& state) {
  const auto family = static_cast<parametric::Family>(state.range(0));
  const auto ds = simulated(static_cast<int>(state.range(1)));
  const parametric::Theta theta = family == parametric::Family::kGamma ? parametric::Theta{5.0, 1.2}
                                                                        : parametric::Theta{4.0, 1.5};
  for (auto _ : state) benchmark::DoNotOptimize(parametric::order_stat_loglik(family, theta, ds));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_OrderStatLogLik)->ArgsProduct({{0, 1}, {16, 100, 1000}});

void BM_ProfitIntervals(benchmark::State& state) {
  const auto ds = simulated(100);
  auto cfg = parametric::default_mh_config(parametric::Family::kGamma);
  cfg.iterations = 3000;
  cfg.burn_in = 1000;
  const auto chain = parametric::fit_mh(parametric::Family::kGamma, ds, cfg);
  const auto posterior =
      parametric::ParametricPosterior::from_chain(chain, static_cast<std::size_t>(state.range(0)));
  const auto grid = pricing::price_grid(5.2, 20.0, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(pricing::profit_intervals(posterior, 5.2, grid));
}
BENCHMARK(BM_ProfitIntervals)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
