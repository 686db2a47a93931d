#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ptauction {

using Rng = std::mt19937_64;

// Deterministic generator for (seed, stream...) so independent chains,
// replications and methods never share a sequence.
Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {});

double uniform01(Rng& rng);

// log of a Gamma(shape, 1) variate. For shape < 1 uses the
// Gamma(shape + 1) * U^(1/shape) boost in log space so tiny shapes
// (k = e^-20 priors) do not underflow to an exact zero.
double log_gamma_variate(double shape, Rng& rng);

// A Beta(a, b) draw returned as the pair (x, 1 - x), both computed from the
// same two gamma variates so the smaller side keeps full relative precision.
struct BetaDraw {
  double lower = 0.5;
  double upper = 0.5;
  double log_lower = -0.6931471805599453;
  double log_upper = -0.6931471805599453;
};

// a = 0 gives the point mass at 0, b = 0 the point mass at 1.
// Throws std::domain_error when both are zero, std::invalid_argument when
// either is negative or non-finite.
BetaDraw draw_beta(double a, double b, Rng& rng);

}  // namespace ptauction
