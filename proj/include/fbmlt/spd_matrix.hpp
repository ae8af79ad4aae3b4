#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace fbmlt {

/// Symmetric positive definite covariance matrix. Construction runs a
/// Cholesky factorization and throws NotPositiveDefiniteError on failure;
/// near-singular input is rejected, never regularized.
class SpdMatrix {
 public:
  explicit SpdMatrix(Eigen::MatrixXd entries);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  /// Lower Cholesky factor computed at construction.
  const Eigen::MatrixXd& cholesky_factor() const noexcept { return l_; }

 private:
  Eigen::MatrixXd m_;
  Eigen::MatrixXd l_;
};

/// Var(X_target | X_given) as the Schur complement of the conditioning block.
double conditional_variance(const SpdMatrix& cov, int target, std::span<const int> given);

/// Product of sequential conditional variances along `order` (a permutation
/// of 0..n-1). Equals det(cov) for every permutation.
double det_as_conditional_product(const SpdMatrix& cov, std::span<const int> order);

/// Gram matrix [fbm_cov(t_i, t_j, H)] of one fBm component.
Eigen::MatrixXd fbm_gram(std::span<const double> times, double H);

}  // namespace fbmlt
