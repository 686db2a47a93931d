#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ptauction/random.hpp"

namespace ptauction {
namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments beta_moments(double a, double b, int n, std::uint64_t seed) {
  Rng rng = make_rng(seed, {});
  double s = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw_beta(a, b, rng).lower;
    s += x;
    ss += x * x;
  }
  const double m = s / n;
  return {m, ss / n - m * m};
}

TEST(Random, SymmetricBetaMeanIsOneHalf) {
  const int n = 100000;
  const auto m = beta_moments(1.0, 1.0, n, 11);
  const double se = std::sqrt(1.0 / 12.0 / n);
  EXPECT_NEAR(m.mean, 0.5, 3 * se);
  EXPECT_NEAR(m.var, 1.0 / 12.0, 0.002);
}

TEST(Random, BetaMomentsAcrossShapes) {
  const int n = 60000;
  for (auto [a, b] : std::vector<std::pair<double, double>>{{0.3, 0.7}, {2.0, 5.0}, {40.0, 3.0}, {0.05, 0.02}}) {
    const double mean = a / (a + b);
    const double var = a * b / ((a + b) * (a + b) * (a + b + 1));
    const auto m = beta_moments(a, b, n, 5);
    EXPECT_NEAR(m.mean, mean, 4 * std::sqrt(var / n)) << a << "," << b;
    EXPECT_NEAR(m.var, var, 0.1 * var + 1e-4) << a << "," << b;
  }
}

TEST(Random, BetaLogsAreConsistent) {
  Rng rng = make_rng(3, {});
  for (double a : {1e-9, 0.01, 0.5, 3.0}) {
    for (double b : {1e-9, 0.2, 7.0}) {
      const auto d = draw_beta(a, b, rng);
      EXPECT_NEAR(d.lower + d.upper, 1.0, 1e-12);
      if (d.lower > 0) {
        EXPECT_NEAR(std::exp(d.log_lower), d.lower, 1e-12 * std::max(1.0, d.lower));
      }
      if (d.upper > 0) {
        EXPECT_NEAR(std::exp(d.log_upper), d.upper, 1e-12 * std::max(1.0, d.upper));
      }
    }
  }
}

TEST(Random, LargeCountConcentrates) {
  Rng rng = make_rng(4, {});
  for (int i = 0; i < 100; ++i) EXPECT_GT(draw_beta(1e6, 1e-9, rng).lower, 0.999);
}

TEST(Random, DegenerateBetaLimits) {
  Rng rng = make_rng(1, {});
  const auto one = draw_beta(2.0, 0.0, rng);
  EXPECT_EQ(one.lower, 1.0);
  EXPECT_EQ(one.upper, 0.0);
  const auto zero = draw_beta(0.0, 2.0, rng);
  EXPECT_EQ(zero.lower, 0.0);
  EXPECT_EQ(zero.upper, 1.0);
  EXPECT_THROW(draw_beta(0.0, 0.0, rng), std::domain_error);
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
  Rng a = make_rng(42, {1, 2});
  Rng b = make_rng(42, {1, 2});
  Rng c = make_rng(42, {1, 3});
  const auto xa = a();
  EXPECT_EQ(xa, b());
  EXPECT_NE(xa, c());
}

TEST(Random, Uniform01IsOpen) {
  Rng rng = make_rng(9, {});
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace ptauction
