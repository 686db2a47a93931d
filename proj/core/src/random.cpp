#include "ptauction/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ptauction {
namespace {

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * stream.size());
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (std::uint64_t s : stream) push(s);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

double uniform01(Rng& rng) {
  // 53 random bits in (0, 1); never returns 0 so log() is always finite.
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(rng() >> 11) + 0.5) * kScale;
}

double log_gamma_variate(double shape, Rng& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("gamma shape must be positive and finite");
  }
  if (shape < 1.0) {
    std::gamma_distribution<double> g(shape + 1.0, 1.0);
    const double boosted = g(rng);
    return std::log(boosted) + std::log(uniform01(rng)) / shape;
  }
  std::gamma_distribution<double> g(shape, 1.0);
  return std::log(g(rng));
}

BetaDraw draw_beta(double a, double b, Rng& rng) {
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("beta parameters must be finite and non-negative");
  }
  if (a == 0.0 && b == 0.0) {
    throw std::domain_error("Beta(0, 0) is improper: no prior mass and no data at this split");
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (a == 0.0) return {0.0, 1.0, kNegInf, 0.0};
  if (b == 0.0) return {1.0, 0.0, 0.0, kNegInf};

  const double la = log_gamma_variate(a, rng);
  const double lb = log_gamma_variate(b, rng);
  // x = 1 / (1 + exp(lb - la)), evaluated on whichever side is stable.
  const double d = lb - la;
  BetaDraw out;
  if (d > 0.0) {
    const double e = std::exp(-d);
    out.lower = e / (1.0 + e);
    out.upper = 1.0 / (1.0 + e);
  } else {
    const double e = std::exp(d);
    out.lower = 1.0 / (1.0 + e);
    out.upper = e / (1.0 + e);
  }
  out.log_lower = -softplus(d);
  out.log_upper = -softplus(-d);
  return out;
}

}  // namespace ptauction
