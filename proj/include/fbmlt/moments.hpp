#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "fbmlt/model.hpp"
#include "fbmlt/quadrature.hpp"
#include "fbmlt/spd_matrix.hpp"

namespace fbmlt {

// ---------------------------------------------------------------------------
// Two increments [r,s] and [r',s'] with r < r', in gap coordinates (a, b, c).

enum class Region {
  overlap = 1,      // r < r' < s < s':  a = r'-r, b = s-r', c = s'-s
  containment = 2,  // r < r' < s' < s:  a = r'-r, b = s'-r', c = s-s'
  disjoint = 3,     // r < s < r' < s':  a = s-r,  b = r'-s,  c = s'-r'
};

inline constexpr std::array<Region, 3> kRegions = {Region::overlap, Region::containment,
                                                   Region::disjoint};

int region_index(Region r);

struct RegionParams {
  Region region;
  double a, b, c;
  double lambda;  // variance of the first increment
  double rho;     // variance of the second increment
  double mu;      // covariance of the two increments

  double gram_det() const noexcept { return lambda * rho - mu * mu; }
  /// Case-specific expression E with lambda*rho - mu^2 >= K * E for a constant K > 0.
  double lower_bound_expression(double H) const;
};

RegionParams region_params(Region region, double a, double b, double c, double H);

/// Which integrand the region quadrature evaluates.
enum class MomentKernel {
  second_moment,  // mu / |eps I + Sigma|^{d/2+1}
  first_chaos,    // mu / ((lambda+eps)(rho+eps))^{d/2+1}
};

struct MomentOptions {
  double rel_tol = 1e-6;
  std::size_t eval_budget = 20'000'000;
  /// Diagnostic: force mu = 0 in the integrand.
  bool zero_covariance = false;
};

/// Regime of the CLT constants: (d = 2, 1/2 < H < 1) or (d = 3, 1/2 < H < 2/3).
bool clt_regime(int d, double H);

/// eps exponent that normalizes the second moment: 4 - 2/H (d = 2), 5 - 2/H (d = 3).
double second_moment_scaling_exponent(int d, double H);

/// V_i(eps) = 2/(2pi)^d * int_{D_i} (t-a-b-c)_+ mu |eps I + Sigma|^{-d/2-1} da db dc.
QuadratureResult v_integral(Region region, double eps, double H, double t, int d,
                            const MomentOptions& opts = {});

/// First-chaos contribution Vtilde_i(eps) over region D_i.
QuadratureResult first_chaos_norm(Region region, double eps, double H, double t, int d,
                                  const MomentOptions& opts = {});

struct VDecomposition {
  double eps, H, t;
  int d;
  std::array<QuadratureResult, 3> v;
  std::array<QuadratureResult, 3> vtilde;

  double v_sum() const noexcept { return v[0].value + v[1].value + v[2].value; }
  double vtilde_sum() const noexcept { return vtilde[0].value + vtilde[1].value + vtilde[2].value; }
  double scale() const;
  double abs_error() const noexcept;
  bool converged() const noexcept;
};

VDecomposition v_decomposition(double eps, double H, double t, int d, const MomentOptions& opts = {});

/// Limiting variance constant (sigma_1^2 for d = 2, sigma_2^2 for d = 3) in closed form.
double sigma_constant(int d, double H, double t);

/// The same constant by 3-d quadrature of the limiting integrand over [0,inf)^2 x [0,t].
QuadratureResult limiting_integral(int d, double H, double t);

// ---------------------------------------------------------------------------

/// int exp(-x'Mx/2) prod x_i^{p_i} dx / (2pi)^{n/2} by the Wick pairing sum.
/// Odd total power gives exactly 0; total power above 4 is rejected.
double gaussian_moment(const SpdMatrix& m, std::span<const int> powers);

struct DiltMomentOptions {
  double rel_tol = 3e-4;
  std::size_t eval_budget = 2'000'000'000;
  bool allow_out_of_regime = false;
};

/// E[(alpha_eps^(k))^2] for the intersection functional on [0,1]^2 by 4-d
/// adaptive quadrature of the Gaussian moment with M = A + eps I. |k| <= 1.
QuadratureResult dilt_second_moment(double eps, double H, const MultiIndex& k,
                                    const DiltMomentOptions& opts = {});

// ---------------------------------------------------------------------------

struct ChaosCoefficient {
  int q;
  std::vector<int> index_tuple;  // 1-based component indices
  std::vector<int> counts;       // q_j: occurrences of component j
  double coefficient;            // 0 when the parity rule fails
  double radial_exponent;        // (|k| + q + d) / 2
};

/// Coefficient of the q-th chaos kernel of the self-intersection functional
/// for k = (|k|, 0, ..., 0) with |k| odd and q odd.
ChaosCoefficient chaos_kernel_coefficient(const MultiIndex& k, int q, std::span<const int> index_tuple);

}  // namespace fbmlt
