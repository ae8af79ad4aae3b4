#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fbmlt/special.hpp"
#include "fbmlt/rng.hpp"
#include "oracles.hpp"

namespace fbmlt {
namespace {

TEST(Hermite, LowOrders) {
  EXPECT_DOUBLE_EQ(hermite(0, 3.7), 1.0);
  EXPECT_DOUBLE_EQ(hermite(1, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(hermite(3, 1.0), -2.0);
}

TEST(Hermite, MatchesDerivativeDefinition) {
  // He_q(x) = (-1)^q e^{x^2/2} d^q/dx^q e^{-x^2/2}; derivatives of the Gaussian are
  // taken by repeated central differences of the exact order q-1 derivative.
  RngStream rng(11, 0);
  for (int q = 1; q <= 12; ++q) {
    for (int i = 0; i < 200; ++i) {
      const double x = 6.0 * rng.uniform() - 3.0;
      const double h = 1e-5;
      auto prev = [&](double y) { return hermite(q - 1, y) * std::exp(-0.5 * y * y) * ((q - 1) % 2 ? -1.0 : 1.0); };
      const double deriv = (prev(x + h) - prev(x - h)) / (2 * h);
      const double fd = (q % 2 ? -1.0 : 1.0) * std::exp(0.5 * x * x) * deriv;
      const double ref = hermite(q, x);
      EXPECT_NEAR(fd, ref, 1e-7 * std::max(1.0, std::abs(ref))) << "q=" << q << " x=" << x;
    }
  }
}

TEST(Hermite, MatchesExplicitSum) {
  for (int q = 0; q <= 12; ++q) {
    for (double x : {-2.5, -0.3, 0.0, 0.7, 1.9}) {
      EXPECT_NEAR(hermite(q, x), oracle::hermite_explicit(q, x), 1e-9 * std::max(1.0, std::abs(hermite(q, x))));
    }
  }
}

TEST(Beta, KnownValues) {
  EXPECT_NEAR(beta_fn(1.0, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(beta_fn(2.0, 0.5), 4.0 / 3.0, 1e-13);
  EXPECT_NEAR(beta_fn(4.0 / 3.0, 2.0 / 3.0), 2 * std::numbers::pi / (3 * std::sqrt(3.0)), 1e-13);
  EXPECT_NEAR(log_beta(300.0, 200.0), std::lgamma(300.0) + std::lgamma(200.0) - std::lgamma(500.0), 1e-9);
}

TEST(Factorials, DoubleFactorial) {
  EXPECT_EQ(double_factorial(-1), 1.0);
  EXPECT_EQ(double_factorial(0), 1.0);
  EXPECT_EQ(double_factorial(5), 15.0);
  EXPECT_EQ(double_factorial(6), 48.0);
  EXPECT_NEAR(log_factorial(20), std::log(2432902008176640000.0), 1e-12);
}

}  // namespace
}  // namespace fbmlt
