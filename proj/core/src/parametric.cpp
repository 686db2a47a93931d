#include "ptauction/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "ptauction/io.hpp"

namespace ptauction::parametric {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kAdaptBatch = 50;

// Evaluate in double without long-double promotion and report edge cases
// through return values rather than exceptions.
using MathPolicy = boost::math::policies::policy<
    boost::math::policies::promote_double<false>, boost::math::policies::domain_error<boost::math::policies::ignore_error>,
    boost::math::policies::overflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::underflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::evaluation_error<boost::math::policies::ignore_error>>;

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

// log P(Z > x) for a standard normal.
double log_normal_sf(double x) {
  if (x < 37.0) return std::log(0.5 * std::erfc(x / std::numbers::sqrt2));
  // Mills-ratio expansion; relative error < 1e-12 here.
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - std::log(x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

Theta default_start(Family family) { return family == Family::kGamma ? Theta{1.0, 1.0} : Theta{2.0, 2.0}; }

bool log_scale(Family family, std::size_t k) { return family == Family::kGamma || k == 1; }

}  // namespace

std::string family_name(Family family) { return family == Family::kGamma ? "gamma" : "truncated-normal"; }

Family parse_family(const std::string& name) {
  if (name == "gamma") return Family::kGamma;
  if (name == "truncated-normal" || name == "tn" || name == "truncated_normal") return Family::kTruncatedNormal;
  throw std::invalid_argument("unknown parametric family '" + name + "' (gamma | truncated-normal)");
}

std::array<std::string, 2> parameter_names(Family family) {
  if (family == Family::kGamma) return {"shape", "rate"};
  return {"mu", "sigma"};
}

bool ParametricModel::valid(Family family, const Theta& theta) {
  if (!std::isfinite(theta[0]) || !std::isfinite(theta[1])) return false;
  if (family == Family::kGamma) return theta[0] > 0.0 && theta[1] > 0.0;
  return theta[1] > 0.0;
}

ParametricModel::ParametricModel(Family family, Theta theta) : family_(family), theta_(theta) {
  if (!valid(family, theta)) throw std::invalid_argument("parameters outside the " + family_name(family) + " domain");
  if (family_ == Family::kGamma) {
    log_norm_ = theta_[0] * std::log(theta_[1]) - std::lgamma(theta_[0]);
  } else {
    log_mass_ = log_normal_sf(-theta_[0] / theta_[1]);
    log_norm_ = -std::log(theta_[1]) - 0.5 * std::log(2.0 * std::numbers::pi) - log_mass_;
  }
}

double ParametricModel::cdf(double y) const {
  if (!(y > 0.0)) return 0.0;
  if (family_ == Family::kGamma) return boost::math::gamma_p(theta_[0], theta_[1] * y, MathPolicy());
  const double z = (y - theta_[0]) / theta_[1];
  if (z < 0.0) {
    const double lower = normal_cdf(-theta_[0] / theta_[1]);
    return (normal_cdf(z) - lower) / std::exp(log_mass_);
  }
  return -std::expm1(log_sf(y));
}

double ParametricModel::log_cdf(double y) const {
  if (!(y > 0.0)) return kNegInf;
  if (family_ == Family::kGamma) return safe_log(cdf(y));
  const double z = (y - theta_[0]) / theta_[1];
  if (z < 0.0) return safe_log(cdf(y));
  const double ls = log_sf(y);
  return ls > -0.6931471805599453 ? safe_log(-std::expm1(ls)) : std::log1p(-std::exp(ls));
}

double ParametricModel::log_sf(double y) const {
  if (!(y > 0.0)) return 0.0;
  if (family_ == Family::kGamma) return safe_log(boost::math::gamma_q(theta_[0], theta_[1] * y, MathPolicy()));
  return log_normal_sf((y - theta_[0]) / theta_[1]) - log_mass_;
}

double ParametricModel::log_pdf(double y) const {
  if (!(y > 0.0)) return kNegInf;
  if (family_ == Family::kGamma) {
    return log_norm_ + (theta_[0] - 1.0) * std::log(y) - theta_[1] * y;
  }
  const double z = (y - theta_[0]) / theta_[1];
  return -0.5 * z * z + log_norm_;
}

std::pair<double, double> ParametricModel::log_cdf_sf(double y) const {
  if (!(y > 0.0)) return {kNegInf, 0.0};
  if (family_ == Family::kTruncatedNormal) return {log_cdf(y), log_sf(y)};
  const double x = theta_[1] * y;
  const double p = boost::math::gamma_p(theta_[0], x, MathPolicy());
  if (p < 0.5) return {safe_log(p), std::log1p(-p)};
  const double q = boost::math::gamma_q(theta_[0], x, MathPolicy());
  return {std::log1p(-q), safe_log(q)};
}

double ParametricModel::pdf(double y) const { return std::exp(log_pdf(y)); }

double ParametricModel::sample(Rng& rng) const {
  if (family_ == Family::kGamma) {
    std::gamma_distribution<double> g(theta_[0], 1.0 / theta_[1]);
    return g(rng);
  }
  const double mu = theta_[0];
  const double sigma = theta_[1];
  const double lower = -mu / sigma;  // standardized truncation point
  if (lower < 0.5) {
    std::normal_distribution<double> n(0.0, 1.0);
    while (true) {
      const double x = n(rng);
      if (x > lower) return mu + sigma * x;
    }
  }
  // Exponential proposal for a far-right truncation point.
  const double lambda = 0.5 * (lower + std::sqrt(lower * lower + 4.0));
  while (true) {
    const double x = lower - std::log(uniform01(rng)) / lambda;
    const double d = x - lambda;
    if (uniform01(rng) <= std::exp(-0.5 * d * d)) return mu + sigma * x;
  }
}

double order_stat_log_density(const ParametricModel& model, double y, std::int64_t n_bidders) {
  if (n_bidders < 2) throw std::invalid_argument("order-statistic density needs n >= 2");
  const auto n = static_cast<double>(n_bidders);
  const auto [log_cdf, log_sf] = model.log_cdf_sf(y);
  double v = std::log(n * (n - 1.0)) + log_sf + model.log_pdf(y);
  if (n_bidders > 2) v += (n - 2.0) * log_cdf;
  return std::isnan(v) ? kNegInf : v;
}

double order_stat_loglik(Family family, const Theta& theta, const auction::AuctionDataset& dataset) {
  if (!ParametricModel::valid(family, theta)) return kNegInf;
  const ParametricModel model(family, theta);
  double total = 0.0;
  for (const auto& o : dataset.observations()) {
    total += order_stat_log_density(model, o.second_highest, o.n_bidders);
    if (total == kNegInf) return kNegInf;
  }
  return total;
}

double log_prior(Family family, const Theta& theta, const Theta& prior_sd) {
  if (!ParametricModel::valid(family, theta)) return kNegInf;
  double lp = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    const double s = theta[k] / prior_sd[k];
    lp -= 0.5 * s * s;
  }
  return lp;
}

MhConfig default_mh_config(Family family) {
  MhConfig c;
  if (family == Family::kTruncatedNormal) c.step = {1.0, 0.35};
  return c;
}

Theta MhResult::posterior_mean() const {
  Theta m{0.0, 0.0};
  if (draws.empty()) return m;
  for (const auto& d : draws) {
    m[0] += d.theta[0];
    m[1] += d.theta[1];
  }
  m[0] /= static_cast<double>(draws.size());
  m[1] /= static_cast<double>(draws.size());
  return m;
}

MhResult fit_mh(Family family, const auction::AuctionDataset& dataset, const MhConfig& config) {
  if (config.burn_in < 0 || !(config.iterations > config.burn_in)) {
    throw std::invalid_argument("MH config needs iterations > burn_in >= 0");
  }
  for (std::size_t k = 0; k < 2; ++k) {
    if (!(config.step[k] > 0.0) || !(config.prior_sd[k] > 0.0)) {
      throw std::invalid_argument("MH proposal steps and prior scales must be positive");
    }
  }
  Theta theta = default_start(family);
  if (config.initial[0] != 0.0 || config.initial[1] != 0.0) theta = config.initial;
  auto log_post = [&](const Theta& t) {
    const double lp = log_prior(family, t, config.prior_sd);
    if (lp == kNegInf) return kNegInf;
    return lp + order_stat_loglik(family, t, dataset);
  };
  double current = log_post(theta);
  if (current == kNegInf) throw std::invalid_argument("MH start has zero posterior density");

  Rng rng = make_rng(config.seed, {0x6d68ull, static_cast<std::uint64_t>(family)});
  std::normal_distribution<double> normal(0.0, 1.0);
  MhResult result;
  result.family = family;
  result.draws.reserve(static_cast<std::size_t>(config.iterations - config.burn_in));
  Theta step = config.step;
  std::array<std::int64_t, 2> accepted{0, 0};
  std::array<int, 2> batch_accepted{0, 0};
  int batch = 0;
  for (int iter = 0; iter < config.iterations; ++iter) {
    const bool burning = iter < config.burn_in;
    for (std::size_t k = 0; k < 2; ++k) {
      Theta proposal = theta;
      double log_jacobian = 0.0;
      const double e = normal(rng);
      if (log_scale(family, k)) {
        proposal[k] = theta[k] * std::exp(step[k] * e);
        log_jacobian = step[k] * e;  // log(theta' / theta)
      } else {
        proposal[k] = theta[k] + step[k] * e;
      }
      const double candidate = log_post(proposal);
      const double log_ratio = candidate - current + log_jacobian;
      if (candidate != kNegInf && std::log(uniform01(rng)) < log_ratio) {
        theta = proposal;
        current = candidate;
        if (burning) ++batch_accepted[k];
        else ++accepted[k];
      }
    }
    // Burn-in only: nudge each log step toward the target acceptance.
    if (burning && config.adapt && (iter + 1) % kAdaptBatch == 0) {
      ++batch;
      const double delta = std::min(0.5, 1.0 / std::sqrt(static_cast<double>(batch)));
      for (std::size_t k = 0; k < 2; ++k) {
        const double rate = static_cast<double>(batch_accepted[k]) / kAdaptBatch;
        step[k] *= std::exp(rate > config.target_acceptance ? delta : -delta);
        batch_accepted[k] = 0;
      }
    }
    if (!burning) result.draws.push_back({iter, theta, current});
  }
  const auto n = static_cast<double>(config.iterations - config.burn_in);
  result.step = step;
  result.acceptance = {static_cast<double>(accepted[0]) / n, static_cast<double>(accepted[1]) / n};
  result.acceptance_rate = 0.5 * (result.acceptance[0] + result.acceptance[1]);
  if (accepted[0] + accepted[1] == 0) {
    throw ChainStuckError("every " + family_name(family) +
                          " MH proposal was rejected; rescale the proposal steps (try smaller --step values)");
  }
  return result;
}

ParametricPosterior::ParametricPosterior(Family family, std::span<const Theta> draws) {
  if (draws.empty()) throw std::invalid_argument("parametric posterior needs at least one draw");
  models_.reserve(draws.size());
  for (const auto& t : draws) models_.emplace_back(family, t);
}

ParametricPosterior ParametricPosterior::from_chain(const MhResult& chain, std::size_t max_draws) {
  if (chain.draws.empty()) throw std::invalid_argument("parametric posterior needs at least one draw");
  if (max_draws == 0) max_draws = chain.draws.size();
  const std::size_t n = chain.draws.size();
  const std::size_t stride = (n + max_draws - 1) / max_draws;
  std::vector<Theta> kept;
  kept.reserve(n / stride + 1);
  for (std::size_t i = stride - 1; i < n; i += stride) kept.push_back(chain.draws[i].theta);
  return ParametricPosterior(chain.family, kept);
}

double ParametricPosterior::mean_cdf(double x) const {
  double sum = 0.0;
  for (const auto& m : models_) sum += m.cdf(x);
  return sum / static_cast<double>(models_.size());
}

void ParametricPosterior::cdf_draws(double x, std::vector<double>& out) const {
  out.resize(models_.size());
  for (std::size_t t = 0; t < models_.size(); ++t) out[t] = models_[t].cdf(x);
}

void write_draws_csv(std::ostream& out, const MhResult& chain) {
  const auto names = parameter_names(chain.family);
  out << "iteration," << names[0] << ',' << names[1] << ",log_posterior\n";
  for (const auto& d : chain.draws) {
    out << d.iteration << ',' << io::fixed(d.theta[0], 8) << ',' << io::fixed(d.theta[1], 8) << ','
        << io::fixed(d.log_posterior, 6) << '\n';
  }
}

}  // namespace ptauction::parametric
