#include "fbmlt/moments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>

#include "fbmlt/error.hpp"
#include "fbmlt/special.hpp"

namespace fbmlt {

namespace {

constexpr double kPi = std::numbers::pi;

double pw(double x, double e) { return x > 0.0 ? std::pow(x, e) : 0.0; }

// (x + h)^e - x^e without cancellation for h << x.
double forward_diff(double x, double h, double e) {
  if (!(h > 0.0)) return 0.0;
  if (!(x > 0.0)) return std::pow(h, e);
  return std::pow(x, e) * std::expm1(e * std::log1p(h / x));
}

// x^{-(d/2 + 1)}
double inv_power(double x, int d) {
  switch (d) {
    case 1: return 1.0 / (x * std::sqrt(x));
    case 2: return 1.0 / (x * x);
    case 3: return 1.0 / (x * x * std::sqrt(x));
    default: return std::pow(x, -(0.5 * d + 1.0));
  }
}

void require_dimension(int d) {
  if (d < 1) throw DomainError("dimension must be positive, got " + std::to_string(d));
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be positive and finite, got " + std::to_string(v));
  }
}

// center, center +/- scale * ratio^j inside (lo, hi)
std::vector<double> symmetric_breakpoints(double center, double lo, double hi, double scale) {
  std::vector<double> pts{center};
  for (double s = scale; center - s > lo || center + s < hi; s *= 4.0) {
    if (center - s > lo) pts.push_back(center - s);
    if (center + s < hi) pts.push_back(center + s);
  }
  return pts;
}

// Thread-safe bookkeeping shared by the nested levels of one integral.
class NestedStats {
 public:
  explicit NestedStats(std::size_t budget) : budget_(budget) {}

  QuadratureOptions options(double rel_tol) const {
    QuadratureOptions o;
    o.rel_tol = rel_tol;
    o.max_intervals = exhausted() ? 1 : 200;
    return o;
  }
  bool exhausted() const { return evals_.load(std::memory_order_relaxed) > budget_; }

  void record(const QuadratureResult& r) {
    evals_.fetch_add(r.evals, std::memory_order_relaxed);
    if (!r.converged) all_converged_.store(false, std::memory_order_relaxed);
    if (r.value != 0.0) {
      const double rel = r.abs_error / std::abs(r.value);
      std::lock_guard lock(mutex_);
      max_rel_ = std::max(max_rel_, rel);
    }
  }

  QuadratureResult finish(QuadratureResult outer) const {
    outer.evals += evals_.load();
    outer.abs_error += max_rel_ * std::abs(outer.value);
    outer.converged = outer.converged && all_converged_.load() && !exhausted();
    return outer;
  }

 private:
  std::size_t budget_;
  std::atomic<std::size_t> evals_{0};
  std::atomic<bool> all_converged_{true};
  std::mutex mutex_;
  double max_rel_ = 0.0;
};

QuadratureResult region_integral(Region region, MomentKernel kernel, double eps, double H, double t,
                                 int d, const MomentOptions& opts) {
  require_hurst(H);
  require_positive(eps, "epsilon");
  require_positive(t, "t");
  require_dimension(d);

  const double scale = std::pow(eps, 1.0 / (2.0 * H)) / 16.0;
  // b = t u^p absorbs the b^{2H-2} growth of the integrand for eps -> 0.
  const double p = H > 0.5 ? std::min(1.0 / (2.0 * H - 1.0), 20.0) : 1.0;
  const double norm = 2.0 / std::pow(2.0 * kPi, d);
  NestedStats stats(opts.eval_budget);

  auto integrand = [&](double a, double b, double c) {
    const auto rp = region_params(region, a, b, c, H);
    const double mu = opts.zero_covariance ? 0.0 : rp.mu;
    if (mu == 0.0) return 0.0;
    const double diag = (eps + rp.lambda) * (eps + rp.rho);
    const double det = kernel == MomentKernel::second_moment ? diag - mu * mu : diag;
    return mu * inv_power(det, d);
  };

  auto inner = [&](double a, double b) {
    const double cmax = t - a - b;
    if (!(cmax > 0.0)) return 0.0;
    const auto bps = geometric_breakpoints(0.0, cmax, scale);
    const auto r = integrate([&](double c) { return (cmax - c) * integrand(a, b, c); }, 0.0, cmax,
                             stats.options(opts.rel_tol * 1e-2), bps);
    stats.record(r);
    return r.value;
  };

  auto middle = [&](double b) {
    const double amax = t - b;
    if (!(amax > 0.0)) return 0.0;
    const auto bps = geometric_breakpoints(0.0, amax, scale);
    const auto r = integrate([&](double a) { return inner(a, b); }, 0.0, amax,
                             stats.options(opts.rel_tol * 1e-1), bps);
    stats.record(r);
    return r.value;
  };

  std::vector<double> ubps;
  for (double b : geometric_breakpoints(0.0, t, scale)) ubps.push_back(std::pow(b / t, 1.0 / p));
  auto outer = [&](double u) {
    if (!(u > 0.0)) return 0.0;
    const double b = t * std::pow(u, p);
    const double jac = t * p * std::pow(u, p - 1.0);
    return jac * middle(b);
  };
  QuadratureOptions oo;
  oo.rel_tol = opts.rel_tol;
  oo.max_intervals = 200;
  auto result = stats.finish(integrate_parallel(outer, 0.0, 1.0, oo, ubps));
  result.value *= norm;
  result.abs_error *= norm;
  return result;
}

}  // namespace

int region_index(Region r) { return static_cast<int>(r); }

double RegionParams::lower_bound_expression(double H) const {
  const double e = 2.0 * H;
  switch (region) {
    case Region::overlap: return pw(a + b, e) * pw(c, e) + pw(a, e) * pw(b + c, e);
    case Region::containment: return pw(b, e) * (pw(a, e) + pw(c, e));
    case Region::disjoint: return pw(a, e) * pw(c, e);
  }
  return 0.0;
}

RegionParams region_params(Region region, double a, double b, double c, double H) {
  if (a < 0.0 || b < 0.0 || c < 0.0) throw DomainError("region gaps must be non-negative");
  const double e = 2.0 * H;
  RegionParams rp{region, a, b, c, 0.0, 0.0, 0.0};
  switch (region) {
    case Region::overlap: {
      rp.lambda = pw(a + b, e);
      rp.rho = pw(b + c, e);
      // Expand around the larger outer gap to keep the difference accurate.
      rp.mu = a >= c ? 0.5 * (forward_diff(a, b + c, e) + pw(b, e) - pw(c, e))
                     : 0.5 * (forward_diff(c, a + b, e) + pw(b, e) - pw(a, e));
      break;
    }
    case Region::containment:
      rp.lambda = pw(a + b + c, e);
      rp.rho = pw(b, e);
      rp.mu = 0.5 * (forward_diff(a, b, e) + forward_diff(c, b, e));
      break;
    case Region::disjoint:
      rp.lambda = pw(a, e);
      rp.rho = pw(c, e);
      rp.mu = 0.5 * (forward_diff(a + b, c, e) - forward_diff(b, c, e));
      break;
  }
  return rp;
}

bool clt_regime(int d, double H) {
  if (d == 2) return H > 0.5 && H < 1.0;
  if (d == 3) return H > 0.5 && H < 2.0 / 3.0;
  return false;
}

double second_moment_scaling_exponent(int d, double H) {
  require_hurst(H);
  if (d == 2) return 4.0 - 2.0 / H;
  if (d == 3) return 5.0 - 2.0 / H;
  throw DomainError("second-moment scaling is defined for d = 2 or 3, got " + std::to_string(d));
}

QuadratureResult v_integral(Region region, double eps, double H, double t, int d,
                            const MomentOptions& opts) {
  return region_integral(region, MomentKernel::second_moment, eps, H, t, d, opts);
}

QuadratureResult first_chaos_norm(Region region, double eps, double H, double t, int d,
                                  const MomentOptions& opts) {
  return region_integral(region, MomentKernel::first_chaos, eps, H, t, d, opts);
}

double VDecomposition::scale() const { return std::pow(eps, second_moment_scaling_exponent(d, H)); }

double VDecomposition::abs_error() const noexcept {
  double e = 0.0;
  for (const auto& r : v) e += r.abs_error;
  return e;
}

bool VDecomposition::converged() const noexcept {
  for (const auto& r : v)
    if (!r.converged) return false;
  for (const auto& r : vtilde)
    if (!r.converged) return false;
  return true;
}

VDecomposition v_decomposition(double eps, double H, double t, int d, const MomentOptions& opts) {
  VDecomposition out{eps, H, t, d, {}, {}};
  for (std::size_t i = 0; i < 3; ++i) {
    out.v[i] = v_integral(kRegions[i], eps, H, t, d, opts);
    out.vtilde[i] = first_chaos_norm(kRegions[i], eps, H, t, d, opts);
  }
  return out;
}

double sigma_constant(int d, double H, double t) {
  require_positive(t, "t");
  if (!clt_regime(d, H)) {
    throw DomainError("limiting variance is defined for d = 2 with 1/2 < H < 1 or d = 3 with "
                      "1/2 < H < 2/3");
  }
  const double lead = (2.0 * H - 1.0) * std::pow(t, 2.0 * H) * beta_fn(2.0, 2.0 * H - 1.0);
  if (d == 2) {
    const double bb = beta_fn(1.0 / H, (4.0 * H - 2.0) / (2.0 * H));
    return lead / (8.0 * kPi * kPi * H) * bb * bb;
  }
  const double bb = beta_fn(1.0 / H, (5.0 * H - 2.0) / (2.0 * H));
  return lead / (16.0 * kPi * kPi * kPi * H) * bb * bb;
}

QuadratureResult limiting_integral(int d, double H, double t) {
  require_dimension(d);
  require_positive(t, "t");
  if (!(H > 0.5 && H < 1.0) || !(H * (d + 2) > 2.0)) {
    throw DomainError("limiting integral diverges for these (d, H)");
  }
  const double e = 2.0 * H;
  const double gexp = -0.5 * (d + 2);
  // a = u/(1-u) with 1 - u = (1-v)^m removes the algebraic tail at a = inf.
  const double m = 1.0 / (H * (d + 2) - 2.0);
  auto radial = [&](double v) {
    const double w = 1.0 - v;
    if (!(w > 0.0)) return 0.0;
    const double wm = std::pow(w, m);
    const double a = (1.0 - wm) / wm;
    const double jac = m * std::pow(w, -m - 1.0);
    const double val = a * std::pow(1.0 + std::pow(a, e), gexp) * jac;
    return std::isfinite(val) ? val : 0.0;
  };
  const double p = 1.0 / (2.0 * H - 1.0);
  NestedStats stats(200'000'000);
  const double tol = 1e-8;

  auto inner = [&](double) {
    const auto r = integrate(radial, 0.0, 1.0, stats.options(tol * 1e-2));
    stats.record(r);
    return r.value;
  };
  auto middle = [&](double) {
    const auto r = integrate([&](double va) { return radial(va) * inner(va); }, 0.0, 1.0,
                             stats.options(tol * 1e-1));
    stats.record(r);
    return r.value;
  };
  // b = t u^p: b^{2H-2} (t - b) db = p t^{2H} (1 - u^p) du.
  auto outer = [&](double u) {
    const double b = t * std::pow(u, p);
    return p * std::pow(t, e) * (1.0 - b / t) * middle(b);
  };
  QuadratureOptions oo;
  oo.rel_tol = tol;
  auto result = stats.finish(integrate_parallel(outer, 0.0, 1.0, oo));
  const double norm = 2.0 / std::pow(2.0 * kPi, d) * H * (2.0 * H - 1.0);
  result.value *= norm;
  result.abs_error *= norm;
  return result;
}

double gaussian_moment(const SpdMatrix& m, std::span<const int> powers) {
  if (static_cast<int>(powers.size()) != m.dim()) {
    throw DomainError("gaussian_moment: power vector length does not match the matrix");
  }
  std::vector<int> idx;
  for (int i = 0; i < m.dim(); ++i) {
    if (powers[static_cast<std::size_t>(i)] < 0) throw DomainError("gaussian_moment: negative power");
    for (int r = 0; r < powers[static_cast<std::size_t>(i)]; ++r) idx.push_back(i);
  }
  if (idx.size() > 4) throw DomainError("gaussian_moment: total power above 4 is not supported");
  if (idx.size() % 2 == 1) return 0.0;
  const Eigen::MatrixXd& l = m.cholesky_factor();
  const double det = std::pow(l.diagonal().prod(), 2);
  const Eigen::MatrixXd c = m.matrix().llt().solve(Eigen::MatrixXd::Identity(m.dim(), m.dim()));
  double wick = 1.0;
  if (idx.size() == 2) {
    wick = c(idx[0], idx[1]);
  } else if (idx.size() == 4) {
    wick = c(idx[0], idx[1]) * c(idx[2], idx[3]) + c(idx[0], idx[2]) * c(idx[1], idx[3]) +
           c(idx[0], idx[3]) * c(idx[1], idx[2]);
  }
  return wick / std::sqrt(det);
}

QuadratureResult dilt_second_moment(double eps, double H, const MultiIndex& k,
                                    const DiltMomentOptions& opts) {
  require_hurst(H);
  require_positive(eps, "epsilon");
  const int d = k.dim();
  require_dimension(d);
  if (k.order() > 1) throw DomainError("dilt_second_moment supports |k| <= 1");
  if (!ModelConfig(H, k, 1.0).dilt_exists() && !opts.allow_out_of_regime) {
    throw DomainError("2|k|H + Hd >= 2: the intersection functional does not converge "
                      "(pass the out-of-regime flag to integrate anyway)");
  }
  const double e = 2.0 * H;
  const double scale = std::pow(eps, 1.0 / e) / 8.0;
  const double norm = std::pow(2.0 * kPi, -d);
  const bool derivative = k.order() == 1;
  NestedStats stats(opts.eval_budget);

  // (-1)^{|k|} (2pi)^{-d} prod_j Wick(M, (k_j, k_j)) with M = A + eps I;
  // powers of the outer coordinates are hoisted out of the inner loop.
  auto level4 = [&](double s1, double r1, double s2) {
    const double s1e = pw(s1, e), r1e = pw(r1, e), s2e = pw(s2, e);
    const double m11 = s1e + r1e + eps;
    const double cov_s = 0.5 * (s1e + s2e - pw(std::abs(s1 - s2), e));
    auto integrand = [&](double r2) {
      const double r2e = pw(r2, e);
      const double m22 = s2e + r2e + eps;
      const double m12 = cov_s + 0.5 * (r1e + r2e - pw(std::abs(r1 - r2), e));
      const double det = m11 * m22 - m12 * m12;
      const double base = d == 1 ? 1.0 / std::sqrt(det) : std::pow(det, -0.5 * d);
      return derivative ? base * m12 / det : base;
    };
    const auto bps = symmetric_breakpoints(r1, 0.0, 1.0, scale);
    const auto r = integrate(integrand, 0.0, 1.0, stats.options(opts.rel_tol * 0.1), bps);
    stats.record(r);
    return r.value;
  };
  auto level3 = [&](double s1, double r1) {
    const auto bps = symmetric_breakpoints(s1, 0.0, 1.0, scale);
    const auto r = integrate([&](double s2) { return level4(s1, r1, s2); }, 0.0, 1.0,
                             stats.options(opts.rel_tol * 0.25), bps);
    stats.record(r);
    return r.value;
  };
  const auto edge_bps = geometric_breakpoints(0.0, 1.0, scale);
  auto level2 = [&](double s1) {
    const auto r = integrate([&](double r1) { return level3(s1, r1); }, 0.0, 1.0,
                             stats.options(opts.rel_tol * 0.5), edge_bps);
    stats.record(r);
    return r.value;
  };
  QuadratureOptions oo;
  oo.rel_tol = opts.rel_tol;
  oo.max_intervals = 200;
  auto result = stats.finish(integrate_parallel(level2, 0.0, 1.0, oo, edge_bps));
  result.value *= norm;
  result.abs_error *= norm;
  return result;
}

ChaosCoefficient chaos_kernel_coefficient(const MultiIndex& k, int q, std::span<const int> index_tuple) {
  const int d = k.dim();
  require_dimension(d);
  for (int j = 1; j < d; ++j) {
    if (k[j] != 0) throw DomainError("chaos coefficients require k = (|k|, 0, ..., 0)");
  }
  if (k.order() % 2 == 0) throw DomainError("chaos coefficients require odd |k|");
  if (q < 1 || q % 2 == 0) throw DomainError("chaos order q must be odd and positive, got " + std::to_string(q));
  if (static_cast<int>(index_tuple.size()) != q) throw DomainError("index tuple must have length q");

  ChaosCoefficient out{q, {index_tuple.begin(), index_tuple.end()}, std::vector<int>(static_cast<std::size_t>(d), 0),
                       0.0, 0.5 * (k.order() + q + d)};
  for (int i : index_tuple) {
    if (i < 1 || i > d) throw DomainError("index tuple entries must lie in 1..d");
    ++out.counts[static_cast<std::size_t>(i - 1)];
  }
  const int lead = k.order() + out.counts[0];
  if (lead % 2 != 0) return out;
  double value = double_factorial(lead - 1);
  for (int j = 1; j < d; ++j) {
    const int qj = out.counts[static_cast<std::size_t>(j)];
    if (qj % 2 != 0) return out;
    value *= double_factorial(qj - 1);
  }
  const int half = (k.order() + q) / 2;
  out.coefficient = (half % 2 == 0 ? 1.0 : -1.0) * std::pow(2.0 * kPi, -0.5 * d) * value;
  return out;
}

}  // namespace fbmlt
