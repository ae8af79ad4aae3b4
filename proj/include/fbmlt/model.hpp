#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fbmlt {

/// Derivative multi-index k = (k_1, ..., k_d); its length is the spatial dimension.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

  /// (order, 0, ..., 0) of length d.
  static MultiIndex leading(int d, int order);

  int dim() const noexcept { return static_cast<int>(entries_.size()); }
  int order() const noexcept { return order_; }
  int operator[](int j) const { return entries_.at(static_cast<std::size_t>(j)); }
  std::span<const int> entries() const noexcept { return entries_; }
  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
  int order_ = 0;
};

/// Parses "1,0,0" style lists.
MultiIndex parse_multi_index(const std::string& text);

struct ModelConfig {
  double H = 0.5;
  MultiIndex k{0};
  double t = 1.0;

  ModelConfig() = default;
  ModelConfig(double hurst, MultiIndex index, double horizon);

  int d() const noexcept { return k.dim(); }
  /// Intersection functional converges: 2|k|H + Hd < 2.
  bool dilt_exists() const noexcept;
  /// Self-intersection functional has all moments: H|k| + Hd < 1.
  bool dslt_exists() const noexcept;
  /// theta = |k| + |k|H + Hd, the factorial growth exponent of the moments.
  double theta() const noexcept;
  double beta_max() const noexcept { return 1.0 / theta(); }
};

struct MollifierSpec {
  double eps = 1.0;
  MultiIndex k{0};

  MollifierSpec() = default;
  MollifierSpec(double bandwidth, MultiIndex index);
};

/// Density derivative delta_eps^(k)(x) of the centred Gaussian with covariance eps*I.
double mollifier_deriv(const MollifierSpec& spec, std::span<const double> x);

/// Covariance of one fBm component: (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
double fbm_cov(double s, double t, double H);

void require_hurst(double H);

}  // namespace fbmlt
