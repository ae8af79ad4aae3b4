#pragma once

#include <span>
#include <utility>

#include "fbmlt/quadrature.hpp"

namespace fbmlt {

struct GammaBoundCheck {
  bool upper;  // Gamma(kappa*n) <= ((n-1)!)^kappa
  bool lower;  // Gamma(kappa*n + 1) >= kappa^n (n!)^kappa
};

/// Both inequalities evaluated in log space. Requires n >= 2: at n = 1 the
/// upper bound reads Gamma(kappa) <= 1, which fails for every kappa in (0,1).
GammaBoundCheck gamma_lemma_check(int n, double kappa);

/// Same comparison without the n >= 2 precondition (used to exhibit the n = 1 counterexample).
GammaBoundCheck gamma_lemma_check_unchecked(int n, double kappa);

struct BetaIdentity {
  double closed_form;
  QuadratureResult quadrature;
};

/// int_0^inf a^alpha (c + a^beta)^gamma da in closed form and by adaptive
/// quadrature on a = u/(1-u). Requires c, beta > 0, alpha > -1, 1 + alpha + gamma*beta < 0.
BetaIdentity beta_integral_identity(double c, double beta, double alpha, double gamma);

/// Dirichlet integral over 0 < r_1 < ... < r_m < t of prod (r_i - r_{i-1})^{alpha_i}:
/// t^{|alpha|+m} prod Gamma(alpha_i + 1) / Gamma(|alpha| + m + 1).
double simplex_integral(double t, std::span<const double> alphas);

/// Right-hand side c^m t^{|alpha|+m} / Gamma(|alpha|+m+1) with c = max_i Gamma(alpha_i + 1).
double simplex_integral_bound(double t, std::span<const double> alphas);

}  // namespace fbmlt
