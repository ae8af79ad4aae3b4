#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fbmlt/rng.hpp"

namespace fbmlt {

/// Uniform grid t*j/n, j = 1..n. Time 0, where every path vanishes, is implicit.
class TimeGrid {
 public:
  TimeGrid(double horizon, int steps);

  double horizon() const noexcept { return t_; }
  int size() const noexcept { return n_; }
  double spacing() const noexcept { return t_ / n_; }
  double time(int j) const noexcept { return t_ * (j + 1) / n_; }
  std::vector<double> times() const;

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double t_;
  int n_;
};

enum class SamplerMethod { cholesky, circulant };

std::string to_string(SamplerMethod m);
SamplerMethod parse_sampler(const std::string& name);

/// Sampled d-dimensional fBm: values(j, i) is component j at grid time i.
struct FbmPath {
  TimeGrid grid;
  Eigen::MatrixXd values;
  double H;
  std::uint64_t seed;
  std::uint64_t stream;
  SamplerMethod method;
  /// Number of tiny negative embedding eigenvalues clamped to zero (circulant only).
  int clamped_eigenvalues = 0;

  int dim() const noexcept { return static_cast<int>(values.rows()); }
  /// Path restricted to every `factor`-th grid point (exact in law on the coarse grid).
  FbmPath coarsen(int factor) const;
  FbmPath negated() const;
};

/// Exact sampler: L z per component with L the (cached) Cholesky factor of the Gram matrix.
FbmPath sample_cholesky(const TimeGrid& grid, double H, int d, RngStream rng);

/// Davies-Harte circulant embedding of fractional Gaussian noise (length-2n
/// real spectral transform), cumulatively summed into a path.
FbmPath sample_circulant(const TimeGrid& grid, double H, int d, RngStream rng);

FbmPath sample_path(SamplerMethod method, const TimeGrid& grid, double H, int d, RngStream rng);

/// Two independent paths drawn from lanes 0 and 1 of the given stream.
std::pair<FbmPath, FbmPath> sample_independent_pair(SamplerMethod method, const TimeGrid& grid,
                                                    double H, int d, const RngStream& rng);

/// Autocovariance of fractional Gaussian noise at integer lag h with step delta.
double fgn_autocov(int lag, double H, double delta);

struct EmbeddingSpectrum {
  std::vector<double> eigenvalues;  // length 2n, clamped to be non-negative
  int clamped = 0;
};

/// Eigenvalues of the circulant embedding of an autocovariance sequence
/// gamma(0..n). Negative eigenvalues below -1e-10 * max throw
/// EmbeddingFailureError; smaller ones are clamped and counted.
EmbeddingSpectrum circulant_spectrum(std::span<const double> autocov);

/// Cached Cholesky factor of the fBm Gram matrix for (n, t, H). The cache
/// holds at most `cholesky_cache_capacity()` factors and is thread safe.
std::shared_ptr<const Eigen::MatrixXd> cholesky_factor(const TimeGrid& grid, double H);
std::size_t cholesky_cache_size();
std::size_t cholesky_cache_capacity();
void set_cholesky_cache_capacity(std::size_t cap);
void clear_cholesky_cache();

/// CSV with header time,comp_1,...,comp_d and 17 significant digits.
void write_path_csv(std::ostream& os, const FbmPath& path);

}  // namespace fbmlt
