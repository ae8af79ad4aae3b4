#include "fbmlt/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbmlt/error.hpp"
#include "fbmlt/special.hpp"

namespace fbmlt {
namespace {

// Slack for exact ties such as Gamma(1) = 0!^kappa = 1.
bool leq(double lhs, double rhs) { return lhs <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)); }

void check_alphas(std::span<const double> alphas) {
  if (alphas.empty()) throw DomainError("simplex integral needs at least one exponent");
  for (double a : alphas) {
    if (!(a > -1.0 && a < 1.0)) throw DomainError("simplex exponents must lie in (-1,1)");
  }
}

}  // namespace

GammaBoundCheck gamma_lemma_check_unchecked(int n, double kappa) {
  if (n < 1) throw DomainError("gamma_lemma_check: n must be positive");
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("gamma_lemma_check: kappa must lie in (0,1)");
  const double upper_lhs = std::lgamma(kappa * n);
  const double upper_rhs = kappa * log_factorial(n - 1);
  const double lower_lhs = std::lgamma(kappa * n + 1.0);
  const double lower_rhs = n * std::log(kappa) + kappa * log_factorial(n);
  return {leq(upper_lhs, upper_rhs), leq(lower_rhs, lower_lhs)};
}

GammaBoundCheck gamma_lemma_check(int n, double kappa) {
  if (n < 2) throw DomainError("gamma_lemma_check: n must be >= 2 (n = 1 is a counterexample)");
  return gamma_lemma_check_unchecked(n, kappa);
}

BetaIdentity beta_integral_identity(double c, double beta, double alpha, double gamma) {
  if (!(c > 0.0)) throw DomainError("beta identity: c must be positive");
  if (!(beta > 0.0)) throw DomainError("beta identity: beta must be positive");
  if (!(alpha > -1.0)) throw DomainError("beta identity: alpha must exceed -1");
  const double tail = 1.0 + alpha + gamma * beta;
  if (!(tail < 0.0)) throw DomainError("beta identity: requires 1 + alpha + gamma*beta < 0");

  const double closed = std::pow(c, tail / beta) / beta * beta_fn((1.0 + alpha) / beta, -tail / beta);

  // a = u/(1-u), then power maps on each half of u that cancel the endpoint
  // behaviour a^alpha near 0 and a^{tail-1} near infinity. The upper half is
  // written in h = 1 - u so that large a keeps full precision.
  auto f = [=](double a) { return a > 0.0 ? std::pow(a, alpha) * std::pow(c + std::pow(a, beta), gamma) : 0.0; };
  const double m0 = std::max(1.0, 1.0 / (1.0 + alpha));
  const double m1 = std::max(1.0, -1.0 / tail);
  auto lower = [=](double w) {
    if (w <= 0.0) return 0.0;
    const double u = 0.5 * std::pow(w, m0);
    const double h = 1.0 - u;
    return f(u / h) / (h * h) * 0.5 * m0 * std::pow(w, m0 - 1.0);
  };
  auto upper = [=](double w) {
    if (w >= 1.0) return 0.0;
    const double h = 0.5 * std::pow(1.0 - w, m1);
    return f((1.0 - h) / h) / (h * h) * 0.5 * m1 * std::pow(1.0 - w, m1 - 1.0);
  };
  QuadratureOptions opts;
  opts.rel_tol = 1e-11;
  opts.max_intervals = 4000;
  auto result = integrate(lower, 0.0, 1.0, opts);
  result += integrate(upper, 0.0, 1.0, opts);
  return {closed, result};
}

double simplex_integral(double t, std::span<const double> alphas) {
  if (!(t > 0.0)) throw DomainError("simplex integral: t must be positive");
  check_alphas(alphas);
  const double m = static_cast<double>(alphas.size());
  double sum = 0.0, log_num = 0.0;
  for (double a : alphas) {
    sum += a;
    log_num += std::lgamma(a + 1.0);
  }
  return std::exp((sum + m) * std::log(t) + log_num - std::lgamma(sum + m + 1.0));
}

double simplex_integral_bound(double t, std::span<const double> alphas) {
  if (!(t > 0.0)) throw DomainError("simplex bound: t must be positive");
  check_alphas(alphas);
  const double m = static_cast<double>(alphas.size());
  double sum = 0.0, c = 0.0;
  for (double a : alphas) {
    sum += a;
    c = std::max(c, std::tgamma(a + 1.0));
  }
  return std::exp(m * std::log(c) + (sum + m) * std::log(t) - std::lgamma(sum + m + 1.0));
}

}  // namespace fbmlt
