#include "fbmlt/verification.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fbmlt/error.hpp"
#include "fbmlt/experiments.hpp"
#include "fbmlt/io.hpp"
#include "fbmlt/lemmas.hpp"
#include "fbmlt/rng.hpp"
#include "fbmlt/spd_matrix.hpp"

namespace fbmlt {

namespace {

constexpr std::size_t kMaxListedFailures = 10;

void note_failure(LedgerEntry& e, const std::string& what) {
  e.passed = false;
  if (e.failures.size() < kMaxListedFailures) e.failures.push_back(what);
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double uniform_in(RngStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

// The upper bound Gamma(kappa n) <= ((n-1)!)^kappa cannot hold when kappa n < 1
// and the left side exceeds the right; those grid points are reported
// separately as counterexamples of the same kind as n = 1.
std::array<LedgerEntry, 2> gamma_suite() {
  LedgerEntry main{"gamma bounds", true, false, "", {}};
  LedgerEntry small{"gamma upper bound, kappa*n < 1", false, true, "", {}};
  int cases = 0, counterexamples = 0;
  for (int n = 2; n <= 60; ++n) {
    for (int i = 1; i <= 19; ++i) {
      const double kappa = 0.05 * i;
      const auto c = gamma_lemma_check(n, kappa);
      ++cases;
      const std::string label = "n=" + std::to_string(n) + " kappa=" + short_num(kappa);
      if (!c.lower) note_failure(main, label + " lower");
      if (c.upper) continue;
      if (kappa * n < 1.0) {
        ++counterexamples;
        small.passed = true;
        if (small.failures.size() < kMaxListedFailures) small.failures.push_back(label);
      } else {
        note_failure(main, label + " upper");
      }
    }
  }
  main.detail = std::to_string(cases) + " cases, n in [2,60], kappa in {0.05,...,0.95}; lower bound on all, "
                "upper bound on kappa*n >= 1";
  small.detail = std::to_string(counterexamples) + " grid points with kappa*n < 1 where Gamma(kappa n) > ((n-1)!)^kappa";
  return {main, small};
}

LedgerEntry gamma_n1_entry() {
  const auto c = gamma_lemma_check_unchecked(1, 0.5);
  LedgerEntry e{"gamma bounds n=1", !c.upper, true,
                "Gamma(0.5) = " + format_double(std::tgamma(0.5)) + " > 0!^0.5 = 1: upper bound fails at n = 1",
                {}};
  return e;
}

LedgerEntry beta_suite(int draws, std::uint64_t seed) {
  LedgerEntry e{"beta integral identity", true, false, "", {}};
  RngStream rng(seed, 1);
  double worst = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double c = uniform_in(rng, 0.5, 2.0);
    const double beta = uniform_in(rng, 0.5, 3.0);
    const double alpha = uniform_in(rng, -0.9, 2.0);
    const double gamma = -(1.0 + alpha) / beta - uniform_in(rng, 0.3, 2.0);
    const auto r = beta_integral_identity(c, beta, alpha, gamma);
    const double rel = std::abs(r.quadrature.value / r.closed_form - 1.0);
    worst = std::max(worst, rel);
    if (!(rel <= 1e-6)) {
      note_failure(e, "c=" + format_double(c) + " beta=" + format_double(beta) + " alpha=" +
                          format_double(alpha) + " gamma=" + format_double(gamma) + " rel=" + format_double(rel));
    }
  }
  e.detail = std::to_string(draws) + " draws, worst rel error " + format_double(worst);
  return e;
}

LedgerEntry simplex_suite(std::uint64_t seed) {
  LedgerEntry e{"simplex integral", true, false, "", {}};
  RngStream rng(seed, 2);
  double worst = 0.0;
  int cases = 0;
  for (int m = 1; m <= 4; ++m) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> alphas(static_cast<std::size_t>(m));
      for (auto& a : alphas) a = uniform_in(rng, -0.9, 0.9);
      const double t = uniform_in(rng, 0.5, 2.0);
      const double closed = simplex_integral(t, alphas);
      const double oracle = simplex_integral_recursive(t, alphas);
      const double bound = simplex_integral_bound(t, alphas);
      const double rel = std::abs(closed / oracle - 1.0);
      worst = std::max(worst, rel);
      ++cases;
      if (!(rel <= 1e-8) || !(closed <= bound * (1.0 + 1e-12))) {
        note_failure(e, "m=" + std::to_string(m) + " t=" + format_double(t) + " rel=" + format_double(rel));
      }
    }
  }
  e.detail = std::to_string(cases) + " cases m <= 4, worst rel error " + format_double(worst) +
             ", bound c^m t^(|a|+m)/Gamma(|a|+m+1) holds";
  return e;
}

LedgerEntry determinant_suite(int count, std::uint64_t seed) {
  LedgerEntry e{"determinant factorization", true, false, "", {}};
  RngStream rng(seed, 3);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const int n = 2 + static_cast<int>(rng.uniform() * 5.0);
    Eigen::MatrixXd g(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) g(r, c) = rng.normal();
    Eigen::MatrixXd m = g * g.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
    m = 0.5 * (m + m.transpose());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    for (int j = n - 1; j > 0; --j) {
      const int k = static_cast<int>(rng.uniform() * (j + 1));
      std::swap(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(std::min(k, j))]);
    }
    const SpdMatrix spd(m);
    const double direct = m.determinant();
    const double product = det_as_conditional_product(spd, order);
    const double rel = std::abs(product / direct - 1.0);
    worst = std::max(worst, rel);
    if (!(rel <= 1e-10)) note_failure(e, "matrix " + std::to_string(i) + " rel=" + format_double(rel));
  }
  e.detail = std::to_string(count) + " random SPD matrices, worst rel error " + format_double(worst);
  return e;
}

LedgerEntry region_suite(int draws, std::uint64_t seed) {
  LedgerEntry e{"region bounds", true, false, "", {}};
  const auto fits = region_bound_suite(draws, seed);
  std::ostringstream detail;
  detail << draws << " draws per region, fitted K:";
  for (const auto& f : fits) {
    detail << " D" << region_index(f.region) << "=" << short_num(f.fitted_k);
    if (!(f.fitted_k > 0.0)) note_failure(e, "D" + std::to_string(region_index(f.region)) + " fitted K not positive");
    if (f.cauchy_schwarz_violations > 0) {
      note_failure(e, "D" + std::to_string(region_index(f.region)) + " |mu| > sqrt(lambda rho) in " +
                          std::to_string(f.cauchy_schwarz_violations) + " draws");
    }
  }
  e.detail = detail.str();
  return e;
}

LedgerEntry lnd_suite() {
  LedgerEntry e{"local nondeterminism", true, false, "", {}};
  const std::vector<int> grids{4, 8, 16, 32};
  const std::vector<double> radii{0.03, 0.07, 0.15, 0.3, 0.6};
  std::ostringstream detail;
  detail << "grids to 32, kappa estimates:";
  for (double H : {0.55, 0.75}) {
    const auto r = lnd_probe(H, grids, radii);
    detail << " H=" << short_num(H) << ": " << short_num(r.kappa);
    if (!(r.kappa > 0.0)) note_failure(e, "H=" + short_num(H) + " kappa not positive");
  }
  // Markov case: Var(B_t | B_s) = (t - s) for Brownian motion and s < t.
  const std::vector<double> times{0.3, 0.8};
  const SpdMatrix cov(fbm_gram(times, 0.5));
  const std::vector<int> given{0};
  const double cv = conditional_variance(cov, 1, given);
  if (!(std::abs(cv - 0.5) <= 1e-12)) note_failure(e, "Brownian conditional variance " + format_double(cv));
  e.detail = detail.str();
  return e;
}

}  // namespace

bool LemmaLedger::all_passed() const {
  for (const auto& e : entries) {
    if (e.expected_failure) continue;
    if (!e.passed) return false;
  }
  return true;
}

void LemmaLedger::print(std::ostream& os) const {
  for (const auto& e : entries) {
    const char* status = e.expected_failure ? (e.passed ? "EXPECTED-FAIL" : "UNEXPECTED-PASS")
                                            : (e.passed ? "PASS" : "FAIL");
    os << status << "  " << e.suite << ": " << e.detail << '\n';
    for (const auto& f : e.failures) os << "      " << f << '\n';
  }
}

std::array<RegionBoundFit, 3> region_bound_suite(int draws, std::uint64_t seed) {
  if (draws < 1) throw DomainError("region_bound_suite: draws must be positive");
  std::array<RegionBoundFit, 3> fits{};
  for (std::size_t i = 0; i < 3; ++i) {
    RngStream rng(seed, 10 + i);
    RegionBoundFit fit{kRegions[i], std::numeric_limits<double>::infinity(), draws, 0};
    for (int j = 0; j < draws; ++j) {
      const double a = std::exp(uniform_in(rng, std::log(1e-3), 0.0));
      const double b = std::exp(uniform_in(rng, std::log(1e-3), 0.0));
      const double c = std::exp(uniform_in(rng, std::log(1e-3), 0.0));
      const double H = uniform_in(rng, 0.05, 0.95);
      const auto rp = region_params(kRegions[i], a, b, c, H);
      if (std::abs(rp.mu) > std::sqrt(rp.lambda * rp.rho) * (1.0 + 1e-12)) ++fit.cauchy_schwarz_violations;
      fit.fitted_k = std::min(fit.fitted_k, rp.gram_det() / rp.lower_bound_expression(H));
    }
    fits[i] = fit;
  }
  return fits;
}

double beta_quadrature(double a, double b) {
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("beta_quadrature: exponents must exceed -1");
  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  // Left half: r = u^{1/(a+1)} turns r^a dr into du/(a+1).
  const double ea = 1.0 / (a + 1.0);
  const auto left = integrate([&](double u) { return std::pow(1.0 - std::pow(u, ea), b) * ea; }, 0.0,
                              std::pow(0.5, a + 1.0), opts);
  // Right half: 1 - r = w^{1/(b+1)}.
  const double eb = 1.0 / (b + 1.0);
  const auto right = integrate([&](double w) { return std::pow(1.0 - std::pow(w, eb), a) * eb; }, 0.0,
                               std::pow(0.5, b + 1.0), opts);
  return left.value + right.value;
}

double simplex_integral_recursive(double t, std::span<const double> alphas) {
  if (alphas.empty()) throw DomainError("simplex integral needs at least one exponent");
  double value = 1.0;
  double e = 0.0;  // homogeneity degree of I_{j-1}
  for (double a : alphas) {
    value *= beta_quadrature(e, a);
    e += a + 1.0;
  }
  return value * std::pow(t, e);
}

LemmaLedger verify_lemmas(const LemmaSuiteOptions& opts) {
  LemmaLedger ledger;
  for (auto& e : gamma_suite()) ledger.entries.push_back(std::move(e));
  if (opts.include_n1_gamma) ledger.entries.push_back(gamma_n1_entry());
  ledger.entries.push_back(beta_suite(opts.beta_draws, opts.seed));
  ledger.entries.push_back(simplex_suite(opts.seed));
  ledger.entries.push_back(determinant_suite(opts.det_matrices, opts.seed));
  ledger.entries.push_back(region_suite(opts.region_draws, opts.seed));
  ledger.entries.push_back(lnd_suite());
  return ledger;
}

}  // namespace fbmlt
