#include "fbmlt/spd_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fbmlt/error.hpp"
#include "fbmlt/model.hpp"

namespace fbmlt {
namespace {

constexpr double kSymmetryTol = 1e-12;
// Smallest admissible squared Cholesky pivot relative to the largest diagonal entry.
constexpr double kPivotTol = 1e-13;

// Returns false if a pivot is non-positive or negligibly small.
bool cholesky(const Eigen::MatrixXd& a, Eigen::MatrixXd& l) {
  const Eigen::Index n = a.rows();
  l = Eigen::MatrixXd::Zero(n, n);
  const double scale = n > 0 ? a.diagonal().cwiseAbs().maxCoeff() : 1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = a(j, j) - l.row(j).head(j).squaredNorm();
    if (!(diag > kPivotTol * scale)) return false;
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / ljj;
    }
  }
  return true;
}

}  // namespace

SpdMatrix::SpdMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw NotPositiveDefiniteError("matrix must be square and non-empty");
  }
  const double scale = std::max(1e-300, m_.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(m_(i, j) - m_(j, i)) > kSymmetryTol * scale) {
        throw NotPositiveDefiniteError("matrix is not symmetric at (" + std::to_string(i) + "," +
                                       std::to_string(j) + ")");
      }
    }
  }
  if (!cholesky(m_, l_)) throw NotPositiveDefiniteError("Cholesky factorization failed");
}

double conditional_variance(const SpdMatrix& cov, int target, std::span<const int> given) {
  const int n = cov.dim();
  if (target < 0 || target >= n) throw DomainError("conditional_variance: target out of range");
  for (int g : given) {
    if (g < 0 || g >= n) throw DomainError("conditional_variance: index out of range");
    if (g == target) throw DomainError("conditional_variance: target is in the conditioning set");
  }
  const double var = cov(target, target);
  if (given.empty()) return var;

  const auto m = static_cast<Eigen::Index>(given.size());
  Eigen::MatrixXd block(m, m);
  Eigen::VectorXd b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    b(i) = cov(given[static_cast<std::size_t>(i)], target);
    for (Eigen::Index j = 0; j < m; ++j) {
      block(i, j) = cov(given[static_cast<std::size_t>(i)], given[static_cast<std::size_t>(j)]);
    }
  }
  Eigen::MatrixXd l;
  if (!cholesky(block, l)) {
    throw DegenerateConditioningError("conditioning block is singular (duplicate variables?)");
  }
  const Eigen::VectorXd w = l.triangularView<Eigen::Lower>().solve(b);
  return std::max(0.0, var - w.squaredNorm());
}

double det_as_conditional_product(const SpdMatrix& cov, std::span<const int> order) {
  const int n = cov.dim();
  if (static_cast<int>(order.size()) != n) throw DomainError("permutation has wrong length");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int p : order) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) {
      throw DomainError("order is not a permutation of 0..n-1");
    }
    seen[static_cast<std::size_t>(p)] = 1;
  }
  double det = 1.0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    det *= conditional_variance(cov, order[j], order.subspan(0, j));
  }
  return det;
}

Eigen::MatrixXd fbm_gram(std::span<const double> times, double H) {
  const auto n = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) = fbm_cov(times[static_cast<std::size_t>(i)],
                                  times[static_cast<std::size_t>(j)], H);
    }
  }
  return g;
}

}  // namespace fbmlt
