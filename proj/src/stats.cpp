#include "fbmlt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fbmlt/error.hpp"
#include "fbmlt/rng.hpp"

namespace fbmlt {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // Theta-function form, accurate for small arguments.
    const double k = pi * pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int j = 1; j <= 7; j += 2) sum += std::exp(-j * j * k);
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double stephens_p(double d, double n) {
  const double rn = std::sqrt(n);
  return kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

KsResult ks_normal(std::span<const double> x, double mean, double variance) {
  if (x.empty()) throw DomainError("ks_normal: empty sample");
  if (!(variance > 0.0)) throw DomainError("ks_normal: variance must be positive");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double sd = std::sqrt(variance);
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = normal_cdf((s[i] - mean) / sd);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return {d, stephens_p(d, n), s.size()};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  return {d, stephens_p(d, ne), static_cast<std::size_t>(std::lround(ne))};
}

double sample_mean(std::span<const double> x) {
  if (x.empty()) throw DomainError("sample_mean: empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("sample_variance: need at least two values");
  const double m = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

BootstrapCi bootstrap(std::span<const double> x, const Statistic& stat, int resamples,
                      std::uint64_t seed, double level) {
  if (x.empty()) throw DomainError("bootstrap: empty sample");
  if (resamples < 2) throw DomainError("bootstrap: need at least two resamples");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("bootstrap: level must lie in (0,1)");
  RngStream rng(seed, 0);
  const std::size_t n = x.size();
  std::vector<double> draw(n), values(static_cast<std::size_t>(resamples));
  for (auto& v : values) {
    for (auto& d : draw) {
      const auto idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
      d = x[std::min(idx, n - 1)];
    }
    v = stat(draw);
  }
  const double m = sample_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  std::sort(values.begin(), values.end());
  const double tail = 0.5 * (1.0 - level);
  auto quantile = [&](double q) {
    const double pos = q * (resamples - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {stat(x), std::sqrt(ss / (resamples - 1)), quantile(tail), quantile(1.0 - tail)};
}

}  // namespace fbmlt
