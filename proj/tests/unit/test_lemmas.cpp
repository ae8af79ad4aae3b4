#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fbmlt/error.hpp"
#include "fbmlt/lemmas.hpp"
#include "fbmlt/rng.hpp"

namespace fbmlt {
namespace {

TEST(GammaLemma, Examples) {
  auto r = gamma_lemma_check(2, 0.5);
  EXPECT_TRUE(r.upper);
  EXPECT_TRUE(r.lower);
  EXPECT_LE(std::tgamma(1.0), 1.0);
  EXPECT_GE(std::tgamma(2.0), 0.25 * std::sqrt(2.0));
  r = gamma_lemma_check(2, 0.9);
  EXPECT_TRUE(r.upper);
  EXPECT_TRUE(r.lower);
  EXPECT_NEAR(std::tgamma(1.8), 0.9314, 1e-4);
  r = gamma_lemma_check(60, 0.33);
  EXPECT_TRUE(r.upper);
  EXPECT_TRUE(r.lower);
}

TEST(GammaLemma, LowerBoundHoldsOnGrid) {
  for (int n = 2; n <= 60; ++n) {
    for (int i = 1; i <= 19; ++i) EXPECT_TRUE(gamma_lemma_check(n, 0.05 * i).lower) << n << " " << 0.05 * i;
  }
}

TEST(GammaLemma, UpperBoundHoldsWhenKappaNAtLeastOne) {
  for (int n = 2; n <= 60; ++n) {
    for (int i = 1; i <= 19; ++i) {
      const double kappa = 0.05 * i;
      if (kappa * n >= 1.0) EXPECT_TRUE(gamma_lemma_check(n, kappa).upper) << n << " " << kappa;
    }
  }
}

TEST(GammaLemma, UpperBoundFailsBelowKappaNOne) {
  // Gamma(x) > 1 on (0, 1), while ((n-1)!)^kappa stays near 1 for small kappa.
  auto r = gamma_lemma_check(2, 0.05);
  EXPECT_FALSE(r.upper);
  EXPECT_GT(std::tgamma(0.1), 1.0);
}

TEST(GammaLemma, NEqualsOneCounterexample) {
  EXPECT_THROW(gamma_lemma_check(1, 0.5), DomainError);
  const auto r = gamma_lemma_check_unchecked(1, 0.5);
  EXPECT_FALSE(r.upper);
  EXPECT_NEAR(std::tgamma(0.5), std::sqrt(std::numbers::pi), 1e-14);
}

TEST(BetaIdentity, Examples) {
  auto r = beta_integral_identity(1, 1, 0, -2);
  EXPECT_NEAR(r.closed_form, 1.0, 1e-14);
  EXPECT_NEAR(r.quadrature.value, 1.0, 1e-10);
  r = beta_integral_identity(1, 1.5, 1, -2);
  const double b = 2 * std::numbers::pi / (3 * std::sqrt(3.0));
  EXPECT_NEAR(r.closed_form, b / 1.5, 1e-13);
  EXPECT_NEAR(r.quadrature.value / r.closed_form, 1.0, 1e-6);
  r = beta_integral_identity(2, 1.5, 0.5, -3);
  EXPECT_NEAR(r.quadrature.value / r.closed_form, 1.0, 1e-6);
}

TEST(BetaIdentity, RandomDraws) {
  RngStream rng(8, 0);
  for (int i = 0; i < 20; ++i) {
    const double c = 0.2 + 3 * rng.uniform();
    const double beta = 0.5 + 2 * rng.uniform();
    const double alpha = -0.8 + 2 * rng.uniform();
    const double gamma = -(1 + alpha) / beta - 0.3 - 2 * rng.uniform();
    const auto r = beta_integral_identity(c, beta, alpha, gamma);
    EXPECT_NEAR(r.quadrature.value / r.closed_form, 1.0, 1e-6) << c << " " << beta << " " << alpha << " " << gamma;
  }
}

TEST(BetaIdentity, RejectsBadParameters) {
  EXPECT_THROW(beta_integral_identity(0, 1, 0, -2), DomainError);
  EXPECT_THROW(beta_integral_identity(1, 0, 0, -2), DomainError);
  EXPECT_THROW(beta_integral_identity(1, 1, -1, -2), DomainError);
  EXPECT_THROW(beta_integral_identity(1, 1, 0, -1), DomainError);
}

TEST(Simplex, Examples) {
  const std::vector<double> a0{0.0}, a1{0.5}, a3{-0.5, -0.5, -0.5};
  EXPECT_NEAR(simplex_integral(1, a0), 1.0, 1e-15);
  EXPECT_NEAR(simplex_integral(2, a1), std::pow(2.0, 1.5) / 1.5, 1e-14);
  EXPECT_NEAR(simplex_integral(2, a1), 1.8856, 1e-4);
  const double expect = std::pow(std::numbers::pi, 1.5) / (0.75 * std::sqrt(std::numbers::pi));
  EXPECT_NEAR(simplex_integral(1, a3), expect, 1e-13);
  EXPECT_THROW(simplex_integral(1, std::vector<double>{1.0}), DomainError);
  EXPECT_THROW(simplex_integral(1, std::vector<double>{-1.0}), DomainError);
}

TEST(Simplex, MonteCarloOracle) {
  // Uniform points on the ordered simplex 0 < r1 < r2 < r3 < 1 via sorted uniforms (volume 1/6).
  RngStream rng(9, 0);
  const int n = 400000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double u[3] = {rng.uniform(), rng.uniform(), rng.uniform()};
    std::sort(u, u + 3);
    s += std::pow(u[0], -0.5) * std::pow(u[1] - u[0], -0.5) * std::pow(u[2] - u[1], -0.5);
  }
  const double mc = s / n / 6.0;
  const std::vector<double> a3{-0.5, -0.5, -0.5};
  EXPECT_NEAR(mc / simplex_integral(1, a3), 1.0, 0.05);
}

TEST(Simplex, BoundHolds) {
  RngStream rng(10, 0);
  for (int i = 0; i < 50; ++i) {
    const int m = 1 + static_cast<int>(rng.next_u64() % 4);
    std::vector<double> a(m);
    for (auto& x : a) x = -0.95 + 1.9 * rng.uniform();
    const double t = 0.1 + 3 * rng.uniform();
    EXPECT_LE(simplex_integral(t, a), simplex_integral_bound(t, a) * (1 + 1e-12));
  }
}

}  // namespace
}  // namespace fbmlt
