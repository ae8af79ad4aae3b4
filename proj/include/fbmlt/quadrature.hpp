#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace fbmlt {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evals = 0;
  bool converged = true;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    abs_error += o.abs_error;
    evals += o.evals;
    converged = converged && o.converged;
    return *this;
  }
};

struct QuadratureOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 400;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod nodes and weights (QUADPACK qk15).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

// Abscissae of the 15-point rule on [lo, hi]: center, then center -/+ offsets.
inline void gk15_nodes(double lo, double hi, double* x) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  x[0] = center;
  for (int j = 0; j < 7; ++j) {
    x[1 + j] = center - half * kXgk[j];
    x[8 + j] = center + half * kXgk[j];
  }
}

inline Segment gk15_combine(double lo, double hi, const double* fx) {
  const double half = 0.5 * (hi - lo);
  const double fc = fx[0];
  const double* fv1 = fx + 1;
  const double* fv2 = fx + 8;
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    resk += kWgk[j] * (fv1[j] + fv2[j]);
    if (j % 2 == 1) resg += kWg[j / 2] * (fv1[j] + fv2[j]);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {lo, hi, resk * half, err};
}

struct Interval {
  double lo, hi;
};

template <class F>
std::vector<Segment> gk15_serial(F& f, const std::vector<Interval>& ivs) {
  std::vector<Segment> out;
  out.reserve(ivs.size());
  double x[15], fx[15];
  for (const auto& iv : ivs) {
    gk15_nodes(iv.lo, iv.hi, x);
    for (int i = 0; i < 15; ++i) fx[i] = f(x[i]);
    out.push_back(gk15_combine(iv.lo, iv.hi, fx));
  }
  return out;
}

// All nodes of all intervals are evaluated concurrently; the combination runs
// in a fixed order, so the result does not depend on the thread count.
template <class F>
std::vector<Segment> gk15_parallel(F& f, const std::vector<Interval>& ivs) {
  const int n = static_cast<int>(ivs.size()) * 15;
  std::vector<double> x(static_cast<std::size_t>(n)), fx(static_cast<std::size_t>(n));
  for (std::size_t s = 0; s < ivs.size(); ++s) gk15_nodes(ivs[s].lo, ivs[s].hi, x.data() + 15 * s);
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) fx[static_cast<std::size_t>(i)] = f(x[static_cast<std::size_t>(i)]);
  std::vector<Segment> out;
  out.reserve(ivs.size());
  for (std::size_t s = 0; s < ivs.size(); ++s) out.push_back(gk15_combine(ivs[s].lo, ivs[s].hi, fx.data() + 15 * s));
  return out;
}

template <class Batch>
QuadratureResult integrate_impl(Batch&& batch, double lo, double hi, const QuadratureOptions& opts,
                                std::span<const double> breakpoints) {
  QuadratureResult out;
  if (!(hi > lo)) return out;
  std::size_t evals = 0;

  std::vector<double> edges;
  edges.reserve(breakpoints.size() + 2);
  edges.push_back(lo);
  for (double b : breakpoints) {
    if (b > lo && b < hi) edges.push_back(b);
  }
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<Interval> initial;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) initial.push_back({edges[i], edges[i + 1]});
  std::priority_queue<Segment> heap;
  double total = 0.0, err = 0.0;
  for (const auto& s : batch(initial)) {
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  evals += 15 * initial.size();
  std::size_t intervals = heap.size();
  const double eps = std::numeric_limits<double>::epsilon();
  while (err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (intervals >= opts.max_intervals) {
      out.converged = false;
      break;
    }
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    // Segment no longer resolvable in floating point.
    if (!(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) <= 100.0 * eps * std::max(std::abs(worst.lo), std::abs(worst.hi))) {
      out.converged = err <= 1e3 * std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
      break;
    }
    heap.pop();
    const auto halves = batch(std::vector<Interval>{{worst.lo, mid}, {mid, worst.hi}});
    evals += 30;
    total += halves[0].value + halves[1].value - worst.value;
    err += halves[0].error + halves[1].error - worst.error;
    heap.push(halves[0]);
    heap.push(halves[1]);
    ++intervals;
  }
  // Re-sum to shed drift from the incremental updates.
  std::vector<Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  for (const auto& s : segs) {
    out.value += s.value;
    out.abs_error += s.error;
  }
  out.evals = evals;
  return out;
}

}  // namespace detail

/// Globally adaptive 15-point Gauss-Kronrod integration of f over [lo, hi].
/// `breakpoints` (strictly inside the interval, any order) seed the initial
/// partition; the worst segment is bisected until the error target is met or
/// `max_intervals` is reached (converged = false in that case).
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureOptions& opts = {},
                           std::span<const double> breakpoints = {}) {
  return detail::integrate_impl(
      [&f](const std::vector<detail::Interval>& ivs) { return detail::gk15_serial(f, ivs); }, lo, hi,
      opts, breakpoints);
}

/// As `integrate`, with the integrand evaluated concurrently across nodes.
/// f must be safe to call from several threads at once.
template <class F>
QuadratureResult integrate_parallel(F&& f, double lo, double hi, const QuadratureOptions& opts = {},
                                    std::span<const double> breakpoints = {}) {
  return detail::integrate_impl(
      [&f](const std::vector<detail::Interval>& ivs) { return detail::gk15_parallel(f, ivs); }, lo, hi,
      opts, breakpoints);
}

/// Points lo + scale * ratio^j (j = 0, 1, ...) strictly below hi. Resolves
/// integrands whose structure lives on a small length scale near lo.
inline std::vector<double> geometric_breakpoints(double lo, double hi, double scale,
                                                 double ratio = 4.0) {
  std::vector<double> pts;
  if (!(scale > 0.0)) return pts;
  for (double s = scale; lo + s < hi; s *= ratio) pts.push_back(lo + s);
  return pts;
}

/// Maps [0, inf) onto [0, 1) with a = u / (1 - u).
template <class F>
auto half_line(F&& f) {
  return [f = std::forward<F>(f)](double u) mutable {
    if (u >= 1.0) return 0.0;
    const double w = 1.0 - u;
    return f(u / w) / (w * w);
  };
}

}  // namespace fbmlt
