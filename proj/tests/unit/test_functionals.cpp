#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fbmlt/error.hpp"
#include "fbmlt/functionals.hpp"
#include "fbmlt/moments.hpp"
#include "fbmlt/pair_sum.hpp"
#include "fbmlt/stats.hpp"
#include "oracles.hpp"

namespace fbmlt {
namespace {

FbmPath zero_path(int d, int n, double t = 1.0) {
  return FbmPath{TimeGrid(t, n), Eigen::MatrixXd::Zero(d, n), 0.5, 0, 0, SamplerMethod::cholesky};
}

// Relative error against the scale of the summands, so odd kernels with
// cancelling sums are held to the same standard.
double abs_scale(const Eigen::MatrixXd& v, const MultiIndex& k, double eps, double delta, bool self,
                 const Eigen::MatrixXd* other = nullptr) {
  const int n = static_cast<int>(v.cols());
  std::vector<double> diff(v.rows());
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = self ? i + 1 : 0; j < n; ++j) {
      for (int c = 0; c < v.rows(); ++c) diff[c] = v(c, j) - (self ? v(c, i) : (*other)(c, i));
      s += std::abs(oracle::kernel_product(k.entries(), eps, diff));
    }
  }
  return delta * delta * s;
}

TEST(Dslt, ZeroPathExamples) {
  EXPECT_EQ(dslt_estimate(zero_path(2, 50), MollifierSpec(0.1, MultiIndex{1, 0})), 0.0);
  const double eps = 0.2;
  const int n = 100;
  const double expect = 1.0 / (2 * std::numbers::pi * eps) * (1.0 / n) * (1.0 / n) * n * (n - 1) / 2.0;
  EXPECT_NEAR(dslt_estimate(zero_path(2, n), MollifierSpec(eps, MultiIndex{0, 0})), expect, 1e-14);
  EXPECT_NEAR(expect, 1.0 / (2 * std::numbers::pi * eps) / 2, 0.01 / (2 * std::numbers::pi * eps));
}

TEST(Dslt, MatchesNaiveLoop) {
  for (const auto& k : {MultiIndex{0}, MultiIndex{1}, MultiIndex{0, 0}, MultiIndex{1, 0}, MultiIndex{2, 1},
                        MultiIndex{1, 0, 0}}) {
    const auto p = sample_cholesky(TimeGrid(1.0, 64), 0.6, k.dim(), RngStream(21, k.order()));
    const double eps = 0.05;
    const double got = dslt_estimate(p, MollifierSpec(eps, k));
    const double ref = oracle::naive_dslt(p.values, k.entries(), eps, 1.0 / 64);
    const double scale = abs_scale(p.values, k, eps, 1.0 / 64, true);
    EXPECT_LE(std::abs(got - ref), 1e-12 * scale) << k.to_string();
    if (k.order() == 0) EXPECT_LE(std::abs(got - ref), 1e-12 * std::abs(ref));
  }
}

TEST(Dilt, Examples) {
  const double eps = 0.3;
  const auto z = zero_path(1, 40);
  const double flat = 1 / std::sqrt(2 * std::numbers::pi * eps);
  EXPECT_NEAR(dilt_estimate(z, z, MollifierSpec(eps, MultiIndex{0})), flat, 1e-13 * flat);
  const auto [a, b] = sample_independent_pair(SamplerMethod::cholesky, TimeGrid(1.0, 64), 0.4, 2, RngStream(3, 0));
  const MollifierSpec k0(0.1, MultiIndex{0, 0});
  EXPECT_NEAR(dilt_estimate(a, b, k0), dilt_estimate(b, a, k0), 1e-13 * dilt_estimate(a, b, k0));
}

TEST(Dilt, MatchesNaiveLoop) {
  for (const auto& k : {MultiIndex{0}, MultiIndex{1}, MultiIndex{1, 0}, MultiIndex{3, 0}, MultiIndex{0, 1, 0}}) {
    const auto [a, b] = sample_independent_pair(SamplerMethod::circulant, TimeGrid(1.0, 64), 0.45, k.dim(),
                                                RngStream(22, k.order()));
    const double eps = 0.07;
    const double got = dilt_estimate(a, b, MollifierSpec(eps, k));
    const double ref = oracle::naive_dilt(a.values, b.values, k.entries(), eps, 1.0 / 64);
    const double scale = abs_scale(a.values, k, eps, 1.0 / 64, false, &b.values);
    EXPECT_LE(std::abs(got - ref), 1e-12 * scale) << k.to_string();
  }
}

TEST(Dilt, Errors) {
  const auto a = zero_path(1, 8);
  const auto b = zero_path(1, 16);
  EXPECT_THROW(dilt_estimate(a, b, MollifierSpec(0.1, MultiIndex{0})), DomainError);
  EXPECT_THROW(dslt_estimate(a, MollifierSpec(0.1, MultiIndex{0, 0})), DomainError);
}

TEST(PairSums, TiledMatchesSerialReference) {
  for (int n : {1, 63, 64, 65, 200}) {
    const auto p = sample_cholesky(TimeGrid(1.0, n), 0.7, 2, RngStream(23, n));
    const auto q = sample_cholesky(TimeGrid(1.0, n), 0.7, 2, RngStream(24, n));
    const MollifierSpec spec(0.02, MultiIndex{0, 1});
    const MollifierKernel kern(spec);
    const double s = kernels::self_pair_sum(p.values, kern);
    const double sr = kernels::self_pair_sum_serial(p.values, spec);
    EXPECT_NEAR(s, sr, 1e-11 * std::max(1.0, std::abs(sr)));
    const double c = kernels::cross_pair_sum(p.values, q.values, kern);
    const double cr = kernels::cross_pair_sum_serial(p.values, q.values, spec);
    EXPECT_NEAR(c, cr, 1e-11 * std::max(1.0, std::abs(cr)));
  }
}

TEST(Dslt, NonNegativeForOrderZeroAndOddUnderNegation) {
  for (int s = 0; s < 10; ++s) {
    const auto p = sample_circulant(TimeGrid(1.0, 64), 0.5, 2, RngStream(25, s));
    EXPECT_GE(dslt_estimate(p, MollifierSpec(0.05, MultiIndex{0, 0})), 0.0);
    const MollifierSpec odd(0.05, MultiIndex{2, 1});
    EXPECT_DOUBLE_EQ(dslt_estimate(p.negated(), odd), -dslt_estimate(p, odd));
  }
}

TEST(Scaling, Exponents) {
  const ModelConfig d2(0.75, MultiIndex{1, 0}, 1.0), d3(0.6, MultiIndex{1, 0, 0}, 1.0);
  EXPECT_NEAR(*clt_scaling_exponent(FunctionalKind::dslt, d2), 2 - 1 / 0.75, 1e-15);
  EXPECT_NEAR(*clt_scaling_exponent(FunctionalKind::dslt, d3), 2.5 - 1 / 0.6, 1e-15);
  EXPECT_FALSE(clt_scaling_exponent(FunctionalKind::dilt, d2));
  EXPECT_FALSE(clt_scaling_exponent(FunctionalKind::dslt, ModelConfig(0.75, MultiIndex{0, 0}, 1.0)));
  EXPECT_FALSE(clt_scaling_exponent(FunctionalKind::dslt, ModelConfig(0.75, MultiIndex{1}, 1.0)));
}

TEST(Resolution, Guard) {
  const TimeGrid g(1.0, 256);
  const double scale = std::pow(1.0 / 256, 0.75);
  EXPECT_EQ(mollifier_resolution(9.5 * scale * scale, g, 0.75), Resolution::resolved);
  EXPECT_EQ(mollifier_resolution(4 * scale * scale, g, 0.75), Resolution::marginal);
  EXPECT_EQ(mollifier_resolution(0.5 * scale * scale, g, 0.75), Resolution::unresolved);
}

TEST(Ensemble, DeterministicAndScaled) {
  const ModelConfig c(0.75, MultiIndex{1, 0}, 1.0);
  const MollifierSpec s(0.05, c.k);
  EnsembleSettings st;
  st.count = 2;
  st.grid_n = 32;
  st.seed = 99;
  const auto a = run_ensemble(c, s, st);
  const auto b = run_ensemble(c, s, st);
  ASSERT_EQ(a.samples.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(a.samples[i].raw, b.samples[i].raw);
    EXPECT_EQ(a.samples[i].stream, static_cast<std::uint64_t>(i));
    EXPECT_EQ(a.samples[i].scaled, a.samples[i].raw * std::pow(0.05, 2 - 1 / 0.75));
  }
  st.count = 1;
  EXPECT_THROW(run_ensemble(c, s, st), DomainError);
  EXPECT_THROW(run_ensemble(c, MollifierSpec(0.05, MultiIndex{1}), EnsembleSettings{}), DomainError);
}

TEST(Ensemble, UnscaledKindsKeepRawValues) {
  const ModelConfig c(0.4, MultiIndex{1}, 1.0);
  EnsembleSettings st;
  st.kind = FunctionalKind::dilt;
  st.count = 4;
  st.grid_n = 16;
  const auto e = run_ensemble(c, MollifierSpec(0.1, c.k), st);
  for (const auto& x : e.samples) EXPECT_EQ(x.scaled, x.raw);
  EXPECT_FALSE(e.scaling_exponent);
}

TEST(Ensemble, OddFunctionalHasZeroMean) {
  const ModelConfig c(0.75, MultiIndex{1, 0}, 1.0);
  EnsembleSettings st;
  st.count = 2000;
  st.grid_n = 64;
  st.seed = 5;
  const auto e = run_ensemble(c, MollifierSpec(0.05, c.k), st);
  EXPECT_NEAR(e.mean, 0.0, 3 * std::sqrt(e.variance / st.count));
}

TEST(Ensemble, VarianceMatchesQuadrature) {
  const double eps = 0.05;
  const ModelConfig c(0.75, MultiIndex{1, 0}, 1.0);
  EnsembleSettings st;
  st.count = 500;
  st.grid_n = 256;
  st.seed = 17;
  const auto e = run_ensemble(c, MollifierSpec(eps, c.k), st);
  MomentOptions o;
  o.rel_tol = 1e-4;
  const auto v = v_decomposition(eps, 0.75, 1.0, 2, o);
  const double target = v.scale() * v.v_sum();
  EXPECT_NEAR(e.variance / target, 1.0, 0.25);
}

TEST(Ensemble, CsvLayout) {
  const ModelConfig c(0.5, MultiIndex{0}, 1.0);
  EnsembleSettings st;
  st.count = 3;
  st.grid_n = 8;
  const auto e = run_ensemble(c, MollifierSpec(0.5, c.k), st);
  std::ostringstream os;
  write_ensemble_csv(os, e);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "sample_index,raw,scaled,seed,stream");
  EXPECT_NE(ensemble_summary_json(e).find("\"variance\""), std::string::npos);
}

TEST(Refinement, ChangesShrinkWithGrid) {
  const ModelConfig c(0.6, MultiIndex{1}, 1.0);
  const auto rows = refinement_table(c, MollifierSpec(0.05, c.k), FunctionalKind::dilt, 32, 4, 20, 3);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].mean_abs_change, 0.0);
  EXPECT_EQ(rows[3].n, 256);
  EXPECT_LT(rows[3].mean_abs_change, rows[1].mean_abs_change);
  EXPECT_LT(rows[3].mean_abs_change, rows[2].mean_abs_change);
}

}  // namespace
}  // namespace fbmlt
