#include "ptauction/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptauction/auction.hpp"
#include "ptauction/base_measure.hpp"
#include "ptauction/currency.hpp"
#include "ptauction/parametric.hpp"
#include "ptauction/polya_tree.hpp"
#include "ptauction/posterior_cdf.hpp"
#include "ptauction/pricing.hpp"
#include "ptauction/random.hpp"
#include "ptauction/sim_harness.hpp"

namespace ptauction::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

// Rendered file name -> contents, flushed only once the command succeeded.
using Artifacts = std::vector<std::pair<std::string, std::string>>;

void write_artifacts(const std::string& dir, const Artifacts& artifacts) {
  fs::create_directories(dir);
  for (const auto& [name, contents] : artifacts) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    file << contents;
    if (!file) throw std::runtime_error("failed writing " + path.string());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json manifest_base(const std::string& subcommand, const std::vector<std::string>& args) {
  Json m;
  m["tool"] = "ptauction";
  m["version"] = PTAUCTION_VERSION;
  m["subcommand"] = subcommand;
  m["argv"] = args;
  return m;
}

// Rounds to 10 decimals so JSON stays readable; raw CSVs carry the detail.
double to_cents(double price) { return std::round(price * 100.0) / 100.0; }

struct DataOptions {
  std::string input;
  std::string increment = "0.01";
  bool jitter_ties = false;
  std::uint64_t tie_seed = 0;
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--input,-i", o.input, "Auctions CSV (auction_id,n_bidders,transaction_price)")->required();
  cmd->add_option("--increment", o.increment, "Bid increment in dollars")->capture_default_str();
  cmd->add_flag("--jitter-ties", o.jitter_ties, "Spread duplicate values within +/- half a cent");
  cmd->add_option("--tie-seed", o.tie_seed, "Seed for tie jitter")->capture_default_str();
}

struct LoadedData {
  auction::AuctionDataset dataset;
  std::vector<auction::TieAdjustment> adjustments;
};

LoadedData load_data(const DataOptions& o) {
  if (!fs::exists(o.input)) throw std::runtime_error("input file not found: " + o.input);
  const auto rows = auction::read_auction_csv_file(o.input);
  auction::TieOptions ties;
  ties.policy = o.jitter_ties ? auction::TiePolicy::kJitter : auction::TiePolicy::kReject;
  ties.seed = o.tie_seed;
  LoadedData data;
  data.dataset = auction::load_auctions(rows, parse_dollars(o.increment), ties, &data.adjustments);
  return data;
}

Json data_json(const DataOptions& o, const LoadedData& data) {
  Json j;
  j["input"] = o.input;
  j["increment"] = o.increment;
  j["jitter_ties"] = o.jitter_ties;
  j["tie_seed"] = o.tie_seed;
  j["auctions"] = data.dataset.size();
  j["total_bidders"] = data.dataset.total_bidders();
  Json adj = Json::array();
  for (const auto& a : data.adjustments) {
    adj.push_back({{"auction_id", a.auction_id}, {"original", a.original}, {"adjusted", a.adjusted}});
  }
  j["tie_adjustments"] = adj;
  return j;
}

struct PricingOptions {
  double cost = 5.2;
  double grid_step = 0.01;
  double level = 0.90;
};

void add_pricing_options(CLI::App* cmd, PricingOptions& o) {
  cmd->add_option("--cost,-c", o.cost, "Unit cost c")->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--grid-step", o.grid_step, "Price grid step")->capture_default_str()->check(
      CLI::PositiveNumber);
  cmd->add_option("--level", o.level, "Posterior band level")->capture_default_str()->check(
      CLI::Range(0.0, 1.0));
}

Json pricing_json(const PricingOptions& o) {
  return {{"cost", o.cost}, {"grid_step", o.grid_step}, {"level", o.level}};
}

// Pointwise CDF grid over [0, hi] plus the profit curve with bands over
// [cost, hi], rendered to CSV; returns the summary fields.
Json price_and_render(const PosteriorCdf& posterior, const PricingOptions& p, double hi, Artifacts& artifacts) {
  if (!(hi > p.cost)) {
    throw std::runtime_error("price grid upper bound " + std::to_string(hi) + " does not exceed the cost");
  }
  const auto cdf_grid = pricing::price_grid(0.0, hi, p.grid_step);
  const auto cdf_rows = summarize_cdf(posterior, cdf_grid, p.level);
  const auto grid = pricing::price_grid(p.cost, hi, p.grid_step);
  const auto curve = pricing::profit_intervals(posterior, p.cost, grid, p.level);
  const auto best = pricing::optimal_price(curve);

  std::ostringstream cdf_csv;
  pricing::write_cdf_grid_csv(cdf_csv, cdf_rows);
  std::ostringstream profit_csv;
  pricing::write_profit_csv(profit_csv, curve);
  artifacts.emplace_back("cdf_grid.csv", cdf_csv.str());
  artifacts.emplace_back("profit_curve.csv", profit_csv.str());

  Json s;
  s["optimal_price"] = to_cents(best.price);
  s["profit_at_optimum"] = best.profit;
  s["interval"] = {curve.profit_lo[best.index], curve.profit_hi[best.index]};
  s["interval_level"] = p.level;
  s["median_valuation"] = posterior_median(posterior, 0.0, hi);
  return s;
}

// ---------------------------------------------------------------- fit-pt

struct FitPtOptions {
  DataOptions data;
  PricingOptions pricing;
  std::string prior = "uniform";
  double ymax = 20.0;
  std::string elicitation;
  std::string k = "tiny";
  std::string depth_weight = "quadratic";
  int burn_in = 1000;
  int draws = 10000;
  std::uint64_t seed = 1;
  std::string band_source = "raw";
  std::string interpolation = "linear";
  std::string out;
};

void add_fit_pt(CLI::App& app, FitPtOptions& o) {
  auto* cmd = app.add_subcommand("fit-pt", "Fit the Polya-tree posterior and price");
  add_data_options(cmd, o.data);
  add_pricing_options(cmd, o.pricing);
  cmd->add_option("--prior", o.prior, "Base measure: uniform | elicited")
      ->capture_default_str()
      ->check(CLI::IsMember({"uniform", "elicited"}));
  cmd->add_option("--ymax", o.ymax, "Upper end of the uniform base measure")->capture_default_str()->check(
      CLI::PositiveNumber);
  cmd->add_option("--elicitation", o.elicitation, "Elicitation CSV (price,percent_willing)");
  cmd->add_option("--k", o.k, "Prior strength: tiny or a positive real")->capture_default_str();
  cmd->add_option("--depth-weight", o.depth_weight, "quadratic (k m^2) | constant (k)")
      ->capture_default_str()
      ->check(CLI::IsMember({"quadratic", "constant"}));
  cmd->add_option("--burn-in", o.burn_in, "Gibbs burn-in sweeps")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  cmd->add_option("--draws", o.draws, "Retained Gibbs sweeps")->capture_default_str()->check(
      CLI::Range(2, 100000000));
  cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--band-source", o.band_source, "raw | rao-blackwell")
      ->capture_default_str()
      ->check(CLI::IsMember({"raw", "rao-blackwell"}));
  cmd->add_option("--interpolation", o.interpolation, "Within-set CDF shape: linear | base-measure")
      ->capture_default_str()
      ->check(CLI::IsMember({"linear", "base-measure"}));
  cmd->add_option("--out,-o", o.out, "Output directory")->required();
}

int cmd_fit_pt(const FitPtOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  if (o.prior == "elicited" && o.elicitation.empty()) {
    throw CLI::ValidationError("--prior elicited needs --elicitation FILE");
  }
  const double k = parse_strength(o.k);
  const auto data = load_data(o.data);
  const BaseMeasure base = o.prior == "uniform"
                               ? BaseMeasure::uniform(o.ymax)
                               : elicited_cdf(read_elicitation_csv_file(o.elicitation));
  const auto partition = pt::build_partition(data.dataset);
  const auto weight = o.depth_weight == "quadratic" ? pt::quadratic_depth_weight(k) : pt::constant_depth_weight(k);
  const auto hyper = pt::init_hyperparams(partition, base, weight);

  pt::GibbsConfig gc;
  gc.burn_in = o.burn_in;
  gc.draws = o.draws;
  gc.seed = o.seed;
  gc.keep_conditionals = o.band_source == "raw";
  const auto started = std::chrono::steady_clock::now();
  const auto gibbs = pt::run_gibbs(data.dataset, hyper, gc);
  pt::EstimateOptions eo;
  eo.band_level = o.pricing.level;
  eo.band_source = o.band_source == "raw" ? pt::BandSource::kRaw : pt::BandSource::kRaoBlackwell;
  eo.interpolation = o.interpolation == "linear" ? pt::LeafInterpolation::kLinear
                                                 : pt::LeafInterpolation::kBaseMeasure;
  const auto estimate = pt::estimate_cdf(gibbs, hyper, partition, base, eo);

  Artifacts artifacts;
  std::ostringstream table;
  pt::write_posterior_table(table, estimate);
  artifacts.emplace_back("posterior_table.csv", table.str());
  Json summary = price_and_render(estimate, o.pricing, estimate.upper_anchor(), artifacts);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  summary["method"] = "polya_tree";
  summary["depth"] = partition.depth();
  summary["auctions"] = data.dataset.size();

  Json manifest = manifest_base("fit-pt", args);
  manifest["config"] = {{"data", data_json(o.data, data)},
                        {"prior", o.prior},
                        {"ymax", o.ymax},
                        {"elicitation", o.elicitation},
                        {"base_measure", base.describe()},
                        {"k", o.k},
                        {"k_value", k},
                        {"depth_weight", o.depth_weight},
                        {"burn_in", o.burn_in},
                        {"draws", o.draws},
                        {"seed", o.seed},
                        {"band_source", o.band_source},
                        {"interpolation", o.interpolation},
                        {"pricing", pricing_json(o.pricing)},
                        {"out", o.out}};
  manifest["diagnostics"] = {{"sampler_seconds", seconds}};
  artifacts.emplace_back("summary.json", dump(summary));
  artifacts.emplace_back("manifest.json", dump(manifest));
  write_artifacts(o.out, artifacts);
  out << summary.dump() << '\n';
  return kExitOk;
}

// ------------------------------------------------------- fit-parametric

struct FitParametricOptions {
  DataOptions data;
  PricingOptions pricing;
  std::string family = "gamma";
  int iterations = 60000;
  int burn_in = 10000;
  std::uint64_t seed = 1;
  std::vector<double> step;
  bool adapt = true;
  std::size_t cdf_draws = 2000;
  double grid_max = 20.0;
  std::string out;
};

void add_fit_parametric(CLI::App& app, FitParametricOptions& o) {
  auto* cmd = app.add_subcommand("fit-parametric", "Fit a gamma or truncated-normal model by MH and price");
  add_data_options(cmd, o.data);
  add_pricing_options(cmd, o.pricing);
  cmd->add_option("--family", o.family, "gamma | truncated-normal")
      ->capture_default_str()
      ->check(CLI::IsMember({"gamma", "truncated-normal", "truncated_normal", "tn"}));
  cmd->add_option("--iterations", o.iterations, "MH iterations including burn-in")->capture_default_str()->check(
      CLI::PositiveNumber);
  cmd->add_option("--burn-in", o.burn_in, "MH burn-in iterations")->capture_default_str()->check(
      CLI::NonNegativeNumber);
  cmd->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--step", o.step, "Initial proposal steps for the two parameters")->expected(2);
  cmd->add_flag("!--no-adapt", o.adapt, "Keep the proposal steps fixed during burn-in");
  cmd->add_option("--cdf-draws", o.cdf_draws, "Thinned draws used for the CDF and bands")
      ->capture_default_str()
      ->check(CLI::Range(2, 10000000));
  cmd->add_option("--grid-max", o.grid_max, "Upper end of the price grid")->capture_default_str()->check(
      CLI::PositiveNumber);
  cmd->add_option("--out,-o", o.out, "Output directory")->required();
}

int cmd_fit_parametric(const FitParametricOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  if (o.burn_in >= o.iterations) throw CLI::ValidationError("--burn-in must be below --iterations");
  const auto family = parametric::parse_family(o.family);
  const auto data = load_data(o.data);
  auto mh = parametric::default_mh_config(family);
  mh.iterations = o.iterations;
  mh.burn_in = o.burn_in;
  mh.seed = o.seed;
  if (!o.step.empty()) mh.step = {o.step[0], o.step[1]};
  mh.adapt = o.adapt;
  const auto started = std::chrono::steady_clock::now();
  const auto chain = parametric::fit_mh(family, data.dataset, mh);
  const auto posterior = parametric::ParametricPosterior::from_chain(chain, o.cdf_draws);

  Artifacts artifacts;
  std::ostringstream draws;
  parametric::write_draws_csv(draws, chain);
  artifacts.emplace_back("draws.csv", draws.str());
  Json summary = price_and_render(posterior, o.pricing, o.grid_max, artifacts);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const auto names = parametric::parameter_names(family);
  const auto mean = chain.posterior_mean();
  summary["method"] = parametric::family_name(family);
  summary["posterior_mean"] = {{names[0], mean[0]}, {names[1], mean[1]}};

  Json manifest = manifest_base("fit-parametric", args);
  manifest["config"] = {{"data", data_json(o.data, data)},
                        {"family", parametric::family_name(family)},
                        {"iterations", mh.iterations},
                        {"burn_in", mh.burn_in},
                        {"seed", mh.seed},
                        {"step", mh.step},
                        {"adapt", mh.adapt},
                        {"prior_sd", mh.prior_sd},
                        {"cdf_draws", o.cdf_draws},
                        {"grid_max", o.grid_max},
                        {"pricing", pricing_json(o.pricing)},
                        {"out", o.out}};
  manifest["diagnostics"] = {{"acceptance_rate", chain.acceptance_rate},
                             {"acceptance", {{names[0], chain.acceptance[0]}, {names[1], chain.acceptance[1]}}},
                             {"tuned_step", chain.step},
                             {"retained_draws", chain.draws.size()},
                             {"sampler_seconds", seconds}};
  artifacts.emplace_back("summary.json", dump(summary));
  artifacts.emplace_back("manifest.json", dump(manifest));
  write_artifacts(o.out, artifacts);
  out << summary.dump() << '\n';
  return kExitOk;
}

// -------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string config_file;
  std::vector<std::string> truths;
  std::vector<int> auctions;
  std::vector<std::string> methods;
  int reps = 30;
  double bidder_mean = 18.5;
  double cost = 5.2;
  std::uint64_t seed = 7;
  double ymax = 20.0;
  std::string k = "tiny";
  int gibbs_burn_in = 500;
  int gibbs_draws = 4000;
  int mh_iterations = 12000;
  int mh_burn_in = 2000;
  std::size_t mh_cdf_draws = 400;
  double grid_step = 0.01;
  unsigned threads = 1;
  bool full = false;
  std::string out;
};

void add_simulate(CLI::App& app, SimulateOptions& o) {
  auto* cmd = app.add_subcommand("simulate", "Run the simulation study");
  cmd->add_option("--config", o.config_file, "Flat key=value file; keys are option names without dashes");
  cmd->add_option("--truth", o.truths, "gamma | mixture | uniform (repeatable; default all)");
  cmd->add_option("--M", o.auctions, "Auctions per dataset (repeatable; default 16 and 100)");
  cmd->add_option("--method", o.methods, "pt | gamma | tn (repeatable; default all)");
  cmd->add_option("--reps", o.reps, "Replications per cell")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--bidder-mean", o.bidder_mean, "Poisson mean bidder count")->capture_default_str()->check(
      CLI::PositiveNumber);
  cmd->add_option("--cost,-c", o.cost, "Unit cost c")->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", o.seed, "Study seed")->capture_default_str();
  cmd->add_option("--ymax", o.ymax, "Uniform base measure upper end and price grid limit")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--k", o.k, "Polya-tree prior strength")->capture_default_str();
  cmd->add_option("--gibbs-burn-in", o.gibbs_burn_in)->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--gibbs-draws", o.gibbs_draws)->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--mh-iterations", o.mh_iterations)->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--mh-burn-in", o.mh_burn_in)->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--mh-cdf-draws", o.mh_cdf_draws)->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--grid-step", o.grid_step)->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--threads", o.threads, "Worker threads")->capture_default_str()->check(
      CLI::Range(1u, 1024u));
  cmd->add_flag("--full", o.full, "Large design: M = 1000 x 10, 100 and 16 x 100, full chains");
  cmd->add_option("--out,-o", o.out, "Output directory")->required();
}

sim::StudyConfig study_config(const SimulateOptions& o, const CLI::App& cmd) {
  sim::StudyConfig c = o.full ? sim::full_study_config() : sim::StudyConfig{};
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (!o.truths.empty()) c.truths = o.truths;
  if (!o.auctions.empty()) c.auction_counts = o.auctions;
  if (!o.methods.empty()) {
    c.methods.clear();
    for (const auto& m : o.methods) c.methods.push_back(sim::parse_method(m));
  }
  // --full supplies its own counts and chain lengths unless overridden.
  if (!o.full || given("--reps")) c.replications = o.reps;
  if (!o.full || given("--gibbs-burn-in")) c.gibbs_burn_in = o.gibbs_burn_in;
  if (!o.full || given("--gibbs-draws")) c.gibbs_draws = o.gibbs_draws;
  if (!o.full || given("--mh-iterations")) c.mh_iterations = o.mh_iterations;
  if (!o.full || given("--mh-burn-in")) c.mh_burn_in = o.mh_burn_in;
  if (!o.full || given("--mh-cdf-draws")) c.mh_cdf_draws = o.mh_cdf_draws;
  c.bidder_mean = o.bidder_mean;
  c.cost = o.cost;
  c.seed = o.seed;
  c.y_max = o.ymax;
  c.k = parse_strength(o.k);
  c.grid_step = o.grid_step;
  c.threads = o.threads;
  if (c.mh_burn_in >= c.mh_iterations) throw CLI::ValidationError("--mh-burn-in must be below --mh-iterations");
  return c;
}

Json study_json(const sim::StudyConfig& c) {
  Json methods = Json::array();
  for (auto m : c.methods) methods.push_back(sim::method_name(m));
  return {{"truths", c.truths},
          {"auction_counts", c.auction_counts},
          {"replications", c.replications},
          {"methods", methods},
          {"bidder_mean", c.bidder_mean},
          {"cost", c.cost},
          {"seed", c.seed},
          {"ymax", c.y_max},
          {"k", c.k},
          {"gibbs_burn_in", c.gibbs_burn_in},
          {"gibbs_draws", c.gibbs_draws},
          {"mh_iterations", c.mh_iterations},
          {"mh_burn_in", c.mh_burn_in},
          {"mh_cdf_draws", c.mh_cdf_draws},
          {"grid_step", c.grid_step},
          {"threads", c.threads}};
}

int cmd_simulate(const SimulateOptions& o, const CLI::App& cmd, const std::vector<std::string>& args,
                 std::ostream& out) {
  const auto config = study_config(o, cmd);
  const auto started = std::chrono::steady_clock::now();
  const auto result = sim::run_study(config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  Artifacts artifacts;
  std::ostringstream results, loss, reps;
  sim::write_results_csv(results, result);
  sim::write_percent_loss_csv(loss, result);
  sim::write_replications_csv(reps, result);
  artifacts.emplace_back("study_results.csv", results.str());
  artifacts.emplace_back("percent_loss.csv", loss.str());
  artifacts.emplace_back("replications.csv", reps.str());

  Json rows = Json::array();
  int failures = 0;
  for (const auto& r : result.rows) {
    failures += r.failures;
    rows.push_back({{"truth", r.truth},
                    {"M", r.auctions},
                    {"method", sim::method_name(r.method)},
                    {"completed", r.completed},
                    {"failures", r.failures},
                    {"price_mean", r.price_mean},
                    {"profit_cents_mean", r.profit_mean_cents},
                    {"percent_loss", std::isfinite(r.percent_loss) ? Json(r.percent_loss) : Json(nullptr)}});
  }
  Json summary = {{"rows", rows}, {"failures", failures}};
  Json manifest = manifest_base("simulate", args);
  manifest["config"] = study_json(config);
  manifest["config"]["config_file"] = o.config_file;
  manifest["config"]["full"] = o.full;
  manifest["config"]["out"] = o.out;
  manifest["diagnostics"] = {{"seconds", seconds}, {"failures", failures}};
  artifacts.emplace_back("summary.json", dump(summary));
  artifacts.emplace_back("manifest.json", dump(manifest));
  write_artifacts(o.out, artifacts);
  out << results.str();
  return kExitOk;
}

// ----------------------------------------------------------- auction-sim

struct AuctionSimOptions {
  std::vector<std::string> valuations;
  std::string truth;
  int bidders = 0;
  std::uint64_t seed = 1;
  std::string start_price = "0.01";
  std::string increment = "0.01";
  std::string out;
};

void add_auction_sim(CLI::App& app, AuctionSimOptions& o) {
  auto* cmd = app.add_subcommand("auction-sim", "Replay proxy bidding for one auction");
  auto* vals = cmd->add_option("--valuations", o.valuations, "Valuations in arrival order, in dollars")
                   ->delimiter(',');
  auto* truth = cmd->add_option("--truth", o.truth, "Draw valuations from gamma | mixture | uniform")
                    ->excludes(vals);
  cmd->add_option("--bidders", o.bidders, "Number of bidders drawn from --truth")->needs(truth)->check(
      CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "RNG seed for --truth")->capture_default_str();
  cmd->add_option("--start-price", o.start_price, "Opening price in dollars")->capture_default_str();
  cmd->add_option("--increment", o.increment, "Bid increment in dollars")->capture_default_str();
  cmd->add_option("--out,-o", o.out, "Optional output directory for summary and manifest");
}

int cmd_auction_sim(const AuctionSimOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  std::vector<Cents> values;
  if (!o.truth.empty()) {
    if (o.bidders < 1) throw CLI::ValidationError("--truth needs --bidders N");
    const auto truth = sim::Truth::parse(o.truth);
    Rng rng = make_rng(o.seed, {});
    for (int i = 0; i < o.bidders; ++i) values.push_back(round_to_cents(truth.sample(rng)));
  } else {
    if (o.valuations.empty()) throw CLI::ValidationError("give --valuations or --truth with --bidders");
    for (const auto& v : o.valuations) values.push_back(parse_dollars(v));
  }
  const Cents start = parse_dollars(o.start_price);
  const Cents inc = parse_dollars(o.increment);
  const auto outcome = auction::simulate_proxy_auction(values, start, inc);

  Json vals = Json::array();
  for (auto v : values) vals.push_back(format_dollars(v));
  Json summary = {{"valuations", vals},
                  {"final_price", format_dollars(outcome.final_price)},
                  {"observed_bid_count", outcome.observed_bid_count},
                  {"winner_index", outcome.winner_index ? Json(*outcome.winner_index) : Json(nullptr)}};
  if (!o.out.empty()) {
    Json manifest = manifest_base("auction-sim", args);
    manifest["config"] = {{"valuations", o.valuations}, {"truth", o.truth},       {"bidders", o.bidders},
                          {"seed", o.seed},             {"start_price", o.start_price},
                          {"increment", o.increment},   {"out", o.out}};
    write_artifacts(o.out, {{"summary.json", dump(summary)}, {"manifest.json", dump(manifest)}});
  }
  out << summary.dump() << '\n';
  return kExitOk;
}

// Turns `--config FILE` lines `key = value` into `--key value` for options
// not already given on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end() || std::next(it) == args.end()) return args;
  const std::string path = *std::next(it);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::vector<std::string> extra;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    if (key == "full") {
      if (value == "true" || value == "1") extra.push_back(flag);
      continue;
    }
    std::stringstream items(value);
    std::string item;
    while (std::getline(items, item, ',')) {
      extra.push_back(flag);
      extra.push_back(trim(item));
    }
  }
  std::vector<std::string> expanded = args;
  expanded.insert(expanded.end(), extra.begin(), extra.end());
  return expanded;
}

}  // namespace

double parse_strength(const std::string& text) {
  if (text == "tiny") return pt::kTinyStrength;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(value > 0.0) || !std::isfinite(value)) {
    throw CLI::ValidationError("--k must be 'tiny' or a positive real, got '" + text + "'");
  }
  return value;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polya-tree and parametric valuation inference from second-price auctions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(PTAUCTION_VERSION));

  FitPtOptions fit_pt;
  FitParametricOptions fit_par;
  SimulateOptions simulate;
  AuctionSimOptions auction_sim;
  add_fit_pt(app, fit_pt);
  add_fit_parametric(app, fit_par);
  add_simulate(app, simulate);
  add_auction_sim(app, auction_sim);

  try {
    std::vector<std::string> args = raw_args;
    if (args.size() > 1 && args[1] == "simulate") args = expand_config(args);
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (app.got_subcommand("fit-pt")) return cmd_fit_pt(fit_pt, args, out);
    if (app.got_subcommand("fit-parametric")) return cmd_fit_parametric(fit_par, args, out);
    if (app.got_subcommand("simulate")) return cmd_simulate(simulate, *app.get_subcommand("simulate"), args, out);
    if (app.got_subcommand("auction-sim")) return cmd_auction_sim(auction_sim, args, out);
    return kExitUsage;
  } catch (const CLI::Error& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const auction::DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace ptauction::cli
