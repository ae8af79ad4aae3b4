#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fbmlt/model.hpp"

namespace fbmlt {

/// Pre-scaled evaluator of delta_eps^(k): inputs are differences already
/// divided by sqrt(eps), so the hot loop is polynomial * exp.
class MollifierKernel {
 public:
  explicit MollifierKernel(const MollifierSpec& spec);

  int dim() const noexcept { return static_cast<int>(orders_.size()); }
  double inv_root_eps() const noexcept { return inv_root_; }

  /// delta_eps^(k)(x) where y = x / sqrt(eps).
  double eval_scaled(const double* y) const noexcept {
    double r2 = 0.0;
    double poly = 1.0;
    for (std::size_t j = 0; j < orders_.size(); ++j) {
      const double v = y[j];
      r2 += v * v;
      poly *= hermite_inline(orders_[j], v);
    }
    return prefactor_ * poly * std::exp(-0.5 * r2);
  }

 private:
  static double hermite_inline(int q, double x) noexcept {
    if (q == 0) return 1.0;
    double prev = 1.0, cur = x;
    for (int n = 1; n < q; ++n) {
      const double next = x * cur - n * prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }

  std::vector<int> orders_;
  double prefactor_;
  double inv_root_;
};

/// Side length of the square tiles in the blocked pair loops.
inline constexpr int kPairTile = 64;

namespace kernels {

// Sums of delta_eps^(k) over grid pairs, without the Delta^2 factor.
// values are d x n (one row per component).

/// Ordered pairs i < j of one path; tiled and OpenMP parallel over tile rows.
double self_pair_sum(const Eigen::MatrixXd& values, const MollifierKernel& kernel);
/// All pairs (i, j) of two paths; tiled and OpenMP parallel over tile rows.
double cross_pair_sum(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      const MollifierKernel& kernel);

/// Serial reference versions: straightforward double loops over mollifier_deriv.
double self_pair_sum_serial(const Eigen::MatrixXd& values, const MollifierSpec& spec);
double cross_pair_sum_serial(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const MollifierSpec& spec);

}  // namespace kernels
}  // namespace fbmlt
