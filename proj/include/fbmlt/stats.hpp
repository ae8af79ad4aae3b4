#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace fbmlt {

double normal_cdf(double x);

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_sf(double lambda);

struct KsResult {
  double statistic;  // sup |F_n - F|
  double p_value;    // asymptotic, with Stephens' finite-sample correction
  std::size_t n;     // effective sample size
};

/// One-sample test against N(mean, variance).
KsResult ks_normal(std::span<const double> x, double mean, double variance);

/// Two-sample test of equal distributions.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

double sample_mean(std::span<const double> x);
/// Unbiased sample variance.
double sample_variance(std::span<const double> x);

struct BootstrapCi {
  double estimate;  // statistic on the full sample
  double se;        // standard deviation over the resamples
  double lo, hi;    // percentile interval
};

using Statistic = std::function<double(std::span<const double>)>;

/// Nonparametric bootstrap with `resamples` draws from RngStream(seed, 0).
BootstrapCi bootstrap(std::span<const double> x, const Statistic& stat, int resamples,
                      std::uint64_t seed, double level = 0.95);

}  // namespace fbmlt
