#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fbmlt/fbm.hpp"
#include "fbmlt/functionals.hpp"
#include "fbmlt/model.hpp"
#include "fbmlt/quadrature.hpp"
#include "fbmlt/stats.hpp"

namespace fbmlt {

// ---------------------------------------------------------------------------
// Fixed-eps CLT surrogate: scaled self-intersection samples against N(0, sigma^2).

struct CltSettings {
  std::vector<double> eps{0.05};
  int grid_n = 256;
  int count = 2000;
  std::uint64_t seed = 42;
  SamplerMethod method = SamplerMethod::cholesky;
  double variance_tolerance = 0.25;  // |var / sigma^2 - 1| allowed
  double ks_level = 0.01;            // reject normality when p <= level
};

struct CltRow {
  double eps;
  int count;
  double mean;
  double variance;
  double variance_ratio;  // variance / sigma^2
  KsResult ks;
  Resolution resolution;
  std::vector<double> scaled;

  bool variance_ok(double tol) const { return std::abs(variance_ratio - 1.0) <= tol; }
  bool ks_ok(double level) const { return ks.p_value > level; }
};

struct CltReport {
  ModelConfig config;
  CltSettings settings;
  double sigma_sq;
  std::vector<CltRow> rows;
  std::vector<std::string> warnings;

  /// |variance ratio - 1| does not increase along the eps ladder.
  bool variance_approaches_sigma() const;
  /// Final (smallest eps) row meets both tolerances.
  bool passed() const;
};

/// Requires the CLT regime and a mollifier the grid resolves: sqrt(eps) below
/// Delta^H is an error, below 3 Delta^H a warning.
CltReport clt_experiment(const ModelConfig& config, const CltSettings& settings);

/// epsilon,count,mean,variance,sigma_sq,variance_ratio,ks_statistic,ks_p_value,resolution
void write_clt_csv(std::ostream& os, const CltReport& r);
std::string clt_verdict_json(const CltReport& r);

// ---------------------------------------------------------------------------
// Moment growth E|alpha|^n against (n!)^theta.

struct MomentSettings {
  FunctionalKind kind = FunctionalKind::dilt;
  std::vector<int> orders{1, 2, 3, 4};
  int grid_n = 128;
  int count = 10000;
  std::uint64_t seed = 1;
  SamplerMethod method = SamplerMethod::cholesky;
  int resamples = 1000;
  bool allow_out_of_regime = false;
};

struct MomentRow {
  int order;
  BootstrapCi ci;  // of E|alpha|^n
  double g;        // E[|alpha|^n]^{1/n} / (n!)^{theta/n}
  bool heavy_tail; // CI width above half the estimate
};

struct MomentGrowthReport {
  ModelConfig config;
  MollifierSpec spec;
  MomentSettings settings;
  double theta;
  std::vector<MomentRow> rows;
  bool lyapunov_ok;  // E|a|^{n}^{1/n} <= upper CI of E|a|^{m}^{1/m} for n < m
  bool jensen_ok;    // odd n: E|a|^n <= upper CI of E|a|^{n+1}^{n/(n+1)}

  /// g(m) / g(n) for two tested orders.
  double g_ratio(int m, int n) const;
};

MomentGrowthReport moment_growth_probe(const ModelConfig& config, const MollifierSpec& spec,
                                       const MomentSettings& settings);

/// order,moment,se,ci_lo,ci_hi,g,heavy_tail
void write_moment_csv(std::ostream& os, const MomentGrowthReport& r);
std::string moment_verdict_json(const MomentGrowthReport& r);

// ---------------------------------------------------------------------------
// Exponential integrability: prefix means of exp(M |alpha|^beta).

struct ExpSettings {
  FunctionalKind kind = FunctionalKind::dilt;
  double beta = 0.5;
  std::vector<double> m_ladder{0.1};
  int grid_n = 128;
  int count = 10000;
  std::uint64_t seed = 1;
  SamplerMethod method = SamplerMethod::cholesky;
  double stability_tolerance = 0.10;
};

struct ExpRow {
  double m;
  std::array<int, 3> prefix;          // N/4, N/2, N
  std::array<double, 3> log_mean;     // log of the prefix mean, by log-sum-exp
  bool finite;                        // every prefix mean representable as a double
  bool stable;                        // last two prefix means within tolerance
};

struct ExpIntegrabilityReport {
  ModelConfig config;
  MollifierSpec spec;
  ExpSettings settings;
  double beta_max;
  bool in_regime;  // beta < beta_max
  std::vector<ExpRow> rows;

  /// Necessary (not sufficient) evidence: every row stable.
  bool stable() const;
};

/// Prefix means of exp(M |a|^beta) over the given values.
ExpRow exp_prefix_row(std::span<const double> values, double beta, double m, double tolerance);

ExpIntegrabilityReport exp_integrability_probe(const ModelConfig& config, const MollifierSpec& spec,
                                               const ExpSettings& settings);

/// M,prefix_1,prefix_2,prefix_3,log_mean_1,log_mean_2,log_mean_3,finite,stable
void write_exp_csv(std::ostream& os, const ExpIntegrabilityReport& r);

// ---------------------------------------------------------------------------
// Local nondeterminism: min Var(B_t | B_s, |t-s| > r) / r^{2H} over small grids.

struct LndRow {
  int n;
  double r;
  double min_ratio;
  double argmin_time;
};

struct LndReport {
  double H;
  std::vector<LndRow> rows;
  double kappa;  // minimum over all rows
};

/// Grids j/n (j = 1..n) on [0,1]. For each target the conditioning set is every
/// grid time farther than r; by monotonicity of conditional variance in the
/// conditioning set this is the worst configuration on the grid.
LndReport lnd_probe(double H, std::span<const int> grid_sizes, std::span<const double> radii);

/// n,r,min_ratio,argmin_time
void write_lnd_csv(std::ostream& os, const LndReport& r);

// ---------------------------------------------------------------------------
// Existence-boundary sweeps.

struct Trend {
  bool monotone_growth;  // strictly increasing as eps decreases
  bool stabilizing;      // successive absolute changes shrink
  double growth_ratio;   // value at the smallest eps / value at the largest
};

/// Values ordered along a decreasing eps ladder.
Trend classify_trend(std::span<const double> values);

struct SweepSettings {
  FunctionalKind kind = FunctionalKind::dilt;
  MultiIndex k{0};
  std::vector<double> hurst{0.3, 0.5, 0.7};
  std::vector<double> eps{0.1, 0.05, 0.025};
  int grid_n = 128;
  int count = 1000;
  std::uint64_t seed = 1;
  SamplerMethod method = SamplerMethod::cholesky;
};

struct SweepRow {
  double H;
  double eps;
  bool condition_holds;
  double mean;
  double variance;
  int count;
};

struct SweepReport {
  SweepSettings settings;
  std::vector<SweepRow> rows;
  std::vector<Trend> trends;  // one per H
};

SweepReport existence_boundary_sweep(const SweepSettings& settings);

/// H,epsilon,condition_holds,mean,variance,count
void write_sweep_csv(std::ostream& os, const SweepReport& r);
std::string sweep_verdict_json(const SweepReport& r);

/// Second moment of the intersection functional by quadrature along an eps ladder.
struct QuadratureLadder {
  double H;
  MultiIndex k;
  std::vector<double> eps;
  std::vector<QuadratureResult> values;
  Trend trend;
};

QuadratureLadder dilt_quadrature_ladder(double H, const MultiIndex& k, std::span<const double> eps,
                                        bool allow_out_of_regime);

}  // namespace fbmlt
