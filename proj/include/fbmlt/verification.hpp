#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "fbmlt/moments.hpp"

namespace fbmlt {

struct LedgerEntry {
  std::string suite;
  bool passed;
  bool expected_failure;  // documented counterexample, reported but not counted
  std::string detail;
  std::vector<std::string> failures;  // first failing cases
};

struct LemmaLedger {
  std::vector<LedgerEntry> entries;
  bool all_passed() const;
  void print(std::ostream& os) const;
};

struct LemmaSuiteOptions {
  std::uint64_t seed = 7;
  bool include_n1_gamma = false;
  int beta_draws = 20;
  int det_matrices = 100;
  int region_draws = 10000;
};

struct RegionBoundFit {
  Region region;
  double fitted_k;  // min of (lambda rho - mu^2) / lower-bound expression
  int draws;
  int cauchy_schwarz_violations;
};

/// Random gaps (log-uniform on [1e-3, 1]) and H uniform on [0.05, 0.95].
std::array<RegionBoundFit, 3> region_bound_suite(int draws, std::uint64_t seed);

/// int_0^1 r^a (1-r)^b dr by quadrature with endpoint power substitutions.
double beta_quadrature(double a, double b);

/// Dirichlet integral over the simplex by the homogeneity recursion
/// I_j(1) = I_{j-1}(1) * int_0^1 r^{e_{j-1}} (1-r)^{alpha_j} dr, evaluated by quadrature.
double simplex_integral_recursive(double t, std::span<const double> alphas);

LemmaLedger verify_lemmas(const LemmaSuiteOptions& opts = {});

}  // namespace fbmlt
