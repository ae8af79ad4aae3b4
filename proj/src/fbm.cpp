#include "fbmlt/fbm.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <list>
#include <mutex>
#include <tuple>

#include "fbmlt/error.hpp"
#include "fbmlt/model.hpp"
#include "fbmlt/spd_matrix.hpp"

namespace fbmlt {

TimeGrid::TimeGrid(double horizon, int steps) : t_(horizon), n_(steps) {
  if (!(t_ > 0.0)) throw DomainError("time grid horizon must be positive");
  if (n_ < 1) throw DomainError("time grid needs at least one step");
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) out[static_cast<std::size_t>(j)] = time(j);
  return out;
}

std::string to_string(SamplerMethod m) {
  return m == SamplerMethod::cholesky ? "cholesky" : "circulant";
}

SamplerMethod parse_sampler(const std::string& name) {
  if (name == "cholesky") return SamplerMethod::cholesky;
  if (name == "circulant") return SamplerMethod::circulant;
  throw DomainError("unknown sampler '" + name + "' (expected cholesky or circulant)");
}

FbmPath FbmPath::coarsen(int factor) const {
  if (factor < 1 || grid.size() % factor != 0) {
    throw DomainError("coarsen factor must divide the number of grid steps");
  }
  FbmPath out = *this;
  out.grid = TimeGrid(grid.horizon(), grid.size() / factor);
  out.values.resize(values.rows(), out.grid.size());
  for (int i = 0; i < out.grid.size(); ++i) out.values.col(i) = values.col(factor * (i + 1) - 1);
  return out;
}

FbmPath FbmPath::negated() const {
  FbmPath out = *this;
  out.values = -values;
  return out;
}

// ---------------------------------------------------------------------------
// Cholesky sampler

namespace {

struct CacheEntry {
  int n;
  double t;
  double H;
  std::shared_ptr<const Eigen::MatrixXd> factor;
};

std::mutex g_cache_mutex;
std::list<CacheEntry> g_cache;  // most recently used at the front
std::size_t g_cache_capacity = 8;

void check_sampler_args(double H, int d) {
  require_hurst(H);
  if (d < 1) throw DomainError("dimension must be >= 1");
}

}  // namespace

std::shared_ptr<const Eigen::MatrixXd> cholesky_factor(const TimeGrid& grid, double H) {
  require_hurst(H);
  {
    std::lock_guard lock(g_cache_mutex);
    for (auto it = g_cache.begin(); it != g_cache.end(); ++it) {
      if (it->n == grid.size() && it->t == grid.horizon() && it->H == H) {
        g_cache.splice(g_cache.begin(), g_cache, it);
        return g_cache.front().factor;
      }
    }
  }
  const auto times = grid.times();
  const SpdMatrix gram(fbm_gram(times, H));
  auto factor = std::make_shared<const Eigen::MatrixXd>(gram.cholesky_factor());
  std::lock_guard lock(g_cache_mutex);
  g_cache.push_front({grid.size(), grid.horizon(), H, factor});
  while (g_cache.size() > g_cache_capacity) g_cache.pop_back();
  return factor;
}

std::size_t cholesky_cache_size() {
  std::lock_guard lock(g_cache_mutex);
  return g_cache.size();
}

std::size_t cholesky_cache_capacity() {
  std::lock_guard lock(g_cache_mutex);
  return g_cache_capacity;
}

void set_cholesky_cache_capacity(std::size_t cap) {
  std::lock_guard lock(g_cache_mutex);
  g_cache_capacity = std::max<std::size_t>(1, cap);
  while (g_cache.size() > g_cache_capacity) g_cache.pop_back();
}

void clear_cholesky_cache() {
  std::lock_guard lock(g_cache_mutex);
  g_cache.clear();
}

FbmPath sample_cholesky(const TimeGrid& grid, double H, int d, RngStream rng) {
  check_sampler_args(H, d);
  const auto factor = cholesky_factor(grid, H);
  const int n = grid.size();
  FbmPath path{grid, Eigen::MatrixXd(d, n), H, rng.seed(), rng.stream(), SamplerMethod::cholesky};
  Eigen::VectorXd z(n);
  for (int j = 0; j < d; ++j) {
    rng.fill_normal({z.data(), static_cast<std::size_t>(n)});
    path.values.row(j) = (factor->triangularView<Eigen::Lower>() * z).transpose();
  }
  return path;
}

// ---------------------------------------------------------------------------
// Circulant embedding

double fgn_autocov(int lag, double H, double delta) {
  const double h = std::abs(static_cast<double>(lag));
  const double e = 2.0 * H;
  return 0.5 * (std::pow(h + 1.0, e) + std::pow(std::abs(h - 1.0), e) - 2.0 * std::pow(h, e)) *
         std::pow(delta, e);
}

namespace {

constexpr double kClampTol = 1e-10;

// FFTW's planner is not re-entrant; plans themselves are executed concurrently
// through the new-array interface.
std::mutex g_fftw_mutex;

struct CirculantPlan {
  int n;
  double t;
  double H;
  EmbeddingSpectrum spectrum;
  fftw_plan c2r = nullptr;
};

std::list<CirculantPlan> g_plans;

const CirculantPlan& circulant_plan(const TimeGrid& grid, double H) {
  {
    std::lock_guard lock(g_fftw_mutex);
    for (const auto& p : g_plans) {
      if (p.n == grid.size() && p.t == grid.horizon() && p.H == H) return p;
    }
  }
  const int n = grid.size();
  std::vector<double> autocov(static_cast<std::size_t>(n) + 1);
  for (int h = 0; h <= n; ++h) autocov[static_cast<std::size_t>(h)] = fgn_autocov(h, H, grid.spacing());
  auto spectrum = circulant_spectrum(autocov);

  std::lock_guard lock(g_fftw_mutex);
  const int m = 2 * n;
  auto* in = fftw_alloc_complex(static_cast<std::size_t>(n) + 1);
  auto* out = fftw_alloc_real(static_cast<std::size_t>(m));
  fftw_plan plan = fftw_plan_dft_c2r_1d(m, in, out, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  g_plans.push_back({n, grid.horizon(), H, std::move(spectrum), plan});
  return g_plans.back();
}

}  // namespace

EmbeddingSpectrum circulant_spectrum(std::span<const double> autocov) {
  if (autocov.size() < 2) throw DomainError("circulant embedding needs at least two lags");
  const int n = static_cast<int>(autocov.size()) - 1;
  const int m = 2 * n;
  std::vector<double> row(static_cast<std::size_t>(m));
  for (int j = 0; j <= n; ++j) row[static_cast<std::size_t>(j)] = autocov[static_cast<std::size_t>(j)];
  for (int j = 1; j < n; ++j) row[static_cast<std::size_t>(m - j)] = autocov[static_cast<std::size_t>(j)];

  std::vector<std::complex<double>> freq(static_cast<std::size_t>(n) + 1);
  {
    std::lock_guard lock(g_fftw_mutex);
    fftw_plan p = fftw_plan_dft_r2c_1d(m, row.data(), reinterpret_cast<fftw_complex*>(freq.data()),
                                       FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
  }
  EmbeddingSpectrum out;
  out.eigenvalues.resize(static_cast<std::size_t>(m));
  double largest = 0.0;
  for (int k = 0; k <= n; ++k) largest = std::max(largest, freq[static_cast<std::size_t>(k)].real());
  for (int k = 0; k <= n; ++k) {
    double lam = freq[static_cast<std::size_t>(k)].real();
    if (lam < 0.0) {
      if (lam < -kClampTol * largest) {
        throw EmbeddingFailureError("eigenvalue " + std::to_string(lam) + " at frequency " +
                                    std::to_string(k));
      }
      lam = 0.0;
      ++out.clamped;
    }
    out.eigenvalues[static_cast<std::size_t>(k)] = lam;
    if (k > 0 && k < n) out.eigenvalues[static_cast<std::size_t>(m - k)] = lam;
  }
  return out;
}

FbmPath sample_circulant(const TimeGrid& grid, double H, int d, RngStream rng) {
  check_sampler_args(H, d);
  const int n = grid.size();
  if (n < 2) throw DomainError("circulant sampler needs n >= 2");
  const auto& plan = circulant_plan(grid, H);
  const auto& lam = plan.spectrum.eigenvalues;
  const int m = 2 * n;
  const double inv_m = 1.0 / m;

  FbmPath path{grid, Eigen::MatrixXd(d, n), H, rng.seed(), rng.stream(), SamplerMethod::circulant};
  path.clamped_eigenvalues = plan.spectrum.clamped;
  std::vector<std::complex<double>> w(static_cast<std::size_t>(n) + 1);
  std::vector<double> noise(static_cast<std::size_t>(m));
  for (int j = 0; j < d; ++j) {
    w[0] = std::sqrt(lam[0] * inv_m) * rng.normal();
    for (int k = 1; k < n; ++k) {
      const double s = std::sqrt(0.5 * lam[static_cast<std::size_t>(k)] * inv_m);
      const double re = rng.normal();
      const double im = rng.normal();
      w[static_cast<std::size_t>(k)] = {s * re, s * im};
    }
    w[static_cast<std::size_t>(n)] = std::sqrt(lam[static_cast<std::size_t>(n)] * inv_m) * rng.normal();
    fftw_execute_dft_c2r(plan.c2r, reinterpret_cast<fftw_complex*>(w.data()), noise.data());
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += noise[static_cast<std::size_t>(i)];
      path.values(j, i) = acc;
    }
  }
  return path;
}

FbmPath sample_path(SamplerMethod method, const TimeGrid& grid, double H, int d, RngStream rng) {
  return method == SamplerMethod::cholesky ? sample_cholesky(grid, H, d, rng)
                                           : sample_circulant(grid, H, d, rng);
}

std::pair<FbmPath, FbmPath> sample_independent_pair(SamplerMethod method, const TimeGrid& grid,
                                                    double H, int d, const RngStream& rng) {
  return {sample_path(method, grid, H, d, rng.with_lane(0)),
          sample_path(method, grid, H, d, rng.with_lane(1))};
}

void write_path_csv(std::ostream& os, const FbmPath& path) {
  os << "time";
  for (int j = 0; j < path.dim(); ++j) os << ",comp_" << (j + 1);
  os << '\n';
  char buf[64];
  for (int i = 0; i < path.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", path.grid.time(i));
    os << buf;
    for (int j = 0; j < path.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", path.values(j, i));
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace fbmlt
