#include "fbmlt/pair_sum.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fbmlt/error.hpp"

namespace fbmlt {

MollifierKernel::MollifierKernel(const MollifierSpec& spec) {
  if (!(spec.eps > 0.0)) throw DomainError("mollifier bandwidth eps must be positive");
  const auto k = spec.k.entries();
  orders_.assign(k.begin(), k.end());
  inv_root_ = 1.0 / std::sqrt(spec.eps);
  const int d = spec.k.dim();
  prefactor_ = std::pow(2.0 * std::numbers::pi * spec.eps, -0.5 * d) *
               std::pow(spec.eps, -0.5 * spec.k.order()) * ((spec.k.order() % 2) ? -1.0 : 1.0);
}

namespace kernels {
namespace {

// Row-major n x d copy scaled by 1/sqrt(eps): contiguous per time point.
std::vector<double> scaled_points(const Eigen::MatrixXd& values, double scale) {
  const auto d = static_cast<std::size_t>(values.rows());
  const auto n = static_cast<std::size_t>(values.cols());
  std::vector<double> out(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      out[i * d + j] = values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) * scale;
    }
  }
  return out;
}

// Sum over the tile [i0,i1) x [j0,j1), keeping only i < j when `strict` is set.
double tile_sum(const std::vector<double>& p, const std::vector<double>& q, int d, int i0, int i1,
                int j0, int j1, bool strict, const MollifierKernel& kernel) {
  double diff[16];
  std::vector<double> heap;
  double* buf = diff;
  if (d > 16) {
    heap.resize(static_cast<std::size_t>(d));
    buf = heap.data();
  }
  double sum = 0.0;
  for (int i = i0; i < i1; ++i) {
    const double* pi = &p[static_cast<std::size_t>(i) * static_cast<std::size_t>(d)];
    const int jstart = strict ? std::max(j0, i + 1) : j0;
    for (int j = jstart; j < j1; ++j) {
      const double* qj = &q[static_cast<std::size_t>(j) * static_cast<std::size_t>(d)];
      for (int c = 0; c < d; ++c) buf[c] = qj[c] - pi[c];
      sum += kernel.eval_scaled(buf);
    }
  }
  return sum;
}

void check_dims(const Eigen::MatrixXd& values, const MollifierKernel& kernel) {
  if (values.rows() != kernel.dim()) {
    throw DomainError("path dimension does not match the multi-index length");
  }
}

}  // namespace

double self_pair_sum(const Eigen::MatrixXd& values, const MollifierKernel& kernel) {
  check_dims(values, kernel);
  const int d = static_cast<int>(values.rows());
  const int n = static_cast<int>(values.cols());
  const auto pts = scaled_points(values, kernel.inv_root_eps());
  const int tiles = (n + kPairTile - 1) / kPairTile;
  std::vector<double> row_sums(static_cast<std::size_t>(tiles), 0.0);

#pragma omp parallel for schedule(dynamic, 1)
  for (int ti = 0; ti < tiles; ++ti) {
    const int i0 = ti * kPairTile, i1 = std::min(n, i0 + kPairTile);
    double acc = 0.0;
    for (int tj = ti; tj < tiles; ++tj) {
      const int j0 = tj * kPairTile, j1 = std::min(n, j0 + kPairTile);
      acc += tile_sum(pts, pts, d, i0, i1, j0, j1, tj == ti, kernel);
    }
    row_sums[static_cast<std::size_t>(ti)] = acc;
  }
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total;
}

double cross_pair_sum(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      const MollifierKernel& kernel) {
  check_dims(a, kernel);
  check_dims(b, kernel);
  const int d = static_cast<int>(a.rows());
  const int na = static_cast<int>(a.cols());
  const int nb = static_cast<int>(b.cols());
  // Negated copies: tile_sum forms q_j - p_i, which then equals a_i - b_j.
  const auto pa = scaled_points(a, -kernel.inv_root_eps());
  const auto pb = scaled_points(b, -kernel.inv_root_eps());
  const int tiles_a = (na + kPairTile - 1) / kPairTile;
  const int tiles_b = (nb + kPairTile - 1) / kPairTile;
  std::vector<double> row_sums(static_cast<std::size_t>(tiles_a), 0.0);

#pragma omp parallel for schedule(dynamic, 1)
  for (int ti = 0; ti < tiles_a; ++ti) {
    const int i0 = ti * kPairTile, i1 = std::min(na, i0 + kPairTile);
    double acc = 0.0;
    for (int tj = 0; tj < tiles_b; ++tj) {
      const int j0 = tj * kPairTile, j1 = std::min(nb, j0 + kPairTile);
      acc += tile_sum(pa, pb, d, i0, i1, j0, j1, false, kernel);
    }
    row_sums[static_cast<std::size_t>(ti)] = acc;
  }
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total;
}

double self_pair_sum_serial(const Eigen::MatrixXd& values, const MollifierSpec& spec) {
  if (values.rows() != spec.k.dim()) throw DomainError("path dimension does not match the multi-index length");
  const auto n = values.cols();
  Eigen::VectorXd diff(values.rows());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      diff = values.col(j) - values.col(i);
      sum += mollifier_deriv(spec, {diff.data(), static_cast<std::size_t>(diff.size())});
    }
  }
  return sum;
}

double cross_pair_sum_serial(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const MollifierSpec& spec) {
  if (a.rows() != spec.k.dim() || b.rows() != spec.k.dim()) {
    throw DomainError("path dimension does not match the multi-index length");
  }
  Eigen::VectorXd diff(a.rows());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      diff = a.col(i) - b.col(j);
      sum += mollifier_deriv(spec, {diff.data(), static_cast<std::size_t>(diff.size())});
    }
  }
  return sum;
}

}  // namespace kernels
}  // namespace fbmlt
