#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "fbmlt/error.hpp"
#include "fbmlt/experiments.hpp"
#include "fbmlt/moments.hpp"

namespace fbmlt {
namespace {

TEST(Clt, ValidationAndResolutionGuard) {
  CltSettings s;
  s.count = 50;
  s.grid_n = 64;
  EXPECT_THROW(clt_experiment(ModelConfig(0.4, MultiIndex{1, 0}, 1.0), s), DomainError);
  EXPECT_THROW(clt_experiment(ModelConfig(0.75, MultiIndex{2, 0}, 1.0), s), DomainError);
  s.eps = {1e-4};
  EXPECT_THROW(clt_experiment(ModelConfig(0.75, MultiIndex{1, 0}, 1.0), s), DomainError);
  s.eps = {0.015};  // Delta^H = 0.044, sqrt(eps) = 0.122 < 3 Delta^H
  const auto r = clt_experiment(ModelConfig(0.75, MultiIndex{1, 0}, 1.0), s);
  EXPECT_EQ(r.rows[0].resolution, Resolution::marginal);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Clt, ReportFieldsAndCsv) {
  CltSettings s;
  s.eps = {0.1, 0.05};
  s.count = 200;
  s.grid_n = 128;
  const auto r = clt_experiment(ModelConfig(0.6, MultiIndex{1, 0, 0}, 1.0), s);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(r.sigma_sq, sigma_constant(3, 0.6, 1.0));
  for (const auto& row : r.rows) {
    EXPECT_GE(row.variance, 0.0);
    EXPECT_GE(row.ks.p_value, 0.0);
    EXPECT_LE(row.ks.p_value, 1.0);
    EXPECT_EQ(row.scaled.size(), 200u);
    EXPECT_NEAR(row.variance_ratio, row.variance / r.sigma_sq, 1e-15);
  }
  std::ostringstream a, b;
  write_clt_csv(a, r);
  write_clt_csv(b, clt_experiment(ModelConfig(0.6, MultiIndex{1, 0, 0}, 1.0), s));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "epsilon,count,mean,variance,sigma_sq,variance_ratio,ks_statistic,ks_p_value,resolution");
  EXPECT_NE(clt_verdict_json(r).find("\"passed\""), std::string::npos);
}

TEST(Moments, GrowthProbe) {
  const ModelConfig c(0.3, MultiIndex{1}, 1.0);
  MomentSettings s;
  s.count = 10000;
  s.grid_n = 64;
  s.resamples = 300;
  const auto r = moment_growth_probe(c, MollifierSpec(0.1, c.k), s);
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_DOUBLE_EQ(r.theta, c.theta());
  for (const auto& row : r.rows) EXPECT_GE(row.ci.estimate, 0.0);
  EXPECT_TRUE(r.lyapunov_ok);
  EXPECT_TRUE(r.jensen_ok);
  EXPECT_LT(r.g_ratio(4, 2), 3.0);
  EXPECT_THROW(r.g_ratio(5, 2), DomainError);
  std::ostringstream os;
  write_moment_csv(os, r);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "order,moment,se,ci_lo,ci_hi,g,heavy_tail");
}

TEST(Moments, OutOfRegimeNeedsOverride) {
  const ModelConfig c(0.7, MultiIndex{1, 0, 0}, 1.0);
  MomentSettings s;
  s.count = 20;
  s.grid_n = 16;
  s.resamples = 10;
  EXPECT_THROW(moment_growth_probe(c, MollifierSpec(0.1, c.k), s), DomainError);
  s.allow_out_of_regime = true;
  EXPECT_NO_THROW(moment_growth_probe(c, MollifierSpec(0.1, c.k), s));
  s.orders = {5};
  EXPECT_THROW(moment_growth_probe(c, MollifierSpec(0.1, c.k), s), DomainError);
}

TEST(ExpProbe, BetaZeroGivesExpM) {
  std::vector<double> v{0.3, -2.0, 5.0, 1.0, 7.0, -1.0, 0.1, 2.0};
  const auto row = exp_prefix_row(v, 0.0, 0.7, 0.1);
  for (double l : row.log_mean) EXPECT_NEAR(l, 0.7, 1e-15);
  EXPECT_TRUE(row.stable);
}

TEST(ExpProbe, OverflowReportedNotThrown) {
  std::vector<double> v{1.0, 1.0, 1.0, 1e6, 1.0, 1.0, 1.0, 1.0};
  const auto row = exp_prefix_row(v, 1.0, 1.0, 0.1);
  EXPECT_FALSE(row.finite);
  EXPECT_FALSE(row.stable);
}

TEST(ExpProbe, StableInRegimeAndRunsBeyond) {
  const ModelConfig c(0.5, MultiIndex{0}, 1.0);
  ExpSettings s;
  s.count = 10000;
  s.grid_n = 64;
  s.beta = 0.5 * c.beta_max();
  const auto r = exp_integrability_probe(c, MollifierSpec(0.1, c.k), s);
  EXPECT_TRUE(r.in_regime);
  EXPECT_TRUE(r.stable());
  s.beta = 2 * c.beta_max();
  const auto out = exp_integrability_probe(c, MollifierSpec(0.1, c.k), s);
  EXPECT_FALSE(out.in_regime);
  EXPECT_EQ(out.rows.size(), 1u);
  std::ostringstream os;
  write_exp_csv(os, out);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "M,prefix_1,prefix_2,prefix_3,log_mean_1,log_mean_2,log_mean_3,finite,stable");
}

TEST(Lnd, BrownianSinglePoint) {
  // H = 1/2: Var(B_t | B_s) = t - s for s < t, and (t - s) t / ... for s > t.
  const std::vector<int> grid{2};
  const std::vector<double> r{0.4};
  const auto rep = lnd_probe(0.5, grid, r);
  // Times 0.5 and 1: Var(B_1 | B_0.5) = 0.5, Var(B_0.5 | B_1) = 0.25.
  EXPECT_NEAR(rep.kappa, 0.25 / 0.4, 1e-13);
  EXPECT_NEAR(rep.rows[0].argmin_time, 0.5, 1e-15);
}

TEST(Lnd, EmptyConditioningRatio) {
  const std::vector<int> grid{4};
  const std::vector<double> r{2.0};
  const auto rep = lnd_probe(0.7, grid, r);
  // No other grid time lies farther than r, so each ratio is t^{2H} / r^{2H}.
  EXPECT_NEAR(rep.kappa, std::pow(0.25 / 2.0, 1.4), 1e-13);
}

TEST(Lnd, PositiveKappa) {
  const std::vector<int> grids{4, 8, 16, 32};
  const std::vector<double> radii{0.03, 0.07, 0.15, 0.3, 0.6};
  for (double H : {0.55, 0.6, 0.75}) {
    const auto rep = lnd_probe(H, grids, radii);
    EXPECT_GT(rep.kappa, 0.0) << H;
    for (const auto& row : rep.rows) EXPECT_GT(row.min_ratio, 0.0);
  }
}

TEST(Trend, Classification) {
  const std::vector<double> grow{1, 2, 4}, settle{1, 1.5, 1.7}, flat{1, 1};
  EXPECT_TRUE(classify_trend(grow).monotone_growth);
  EXPECT_FALSE(classify_trend(grow).stabilizing);
  EXPECT_TRUE(classify_trend(settle).stabilizing);
  EXPECT_DOUBLE_EQ(classify_trend(grow).growth_ratio, 4.0);
  EXPECT_FALSE(classify_trend(flat).monotone_growth);
}

TEST(Sweep, DiltOrderZeroStableInDimensionOne) {
  SweepSettings s;
  s.k = MultiIndex{0};
  s.hurst = {0.3, 0.5, 0.7};
  s.count = 1000;
  s.grid_n = 128;
  const auto r = existence_boundary_sweep(s);
  ASSERT_EQ(r.trends.size(), 3u);
  for (const auto& row : r.rows) EXPECT_TRUE(row.condition_holds);
  for (const auto& t : r.trends) EXPECT_TRUE(t.stabilizing);
  std::ostringstream os;
  write_sweep_csv(os, r);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "H,epsilon,condition_holds,mean,variance,count");
}

TEST(Sweep, DiltViolatedGrows) {
  SweepSettings s;
  s.k = MultiIndex{1, 0, 0};
  s.hurst = {0.7};
  s.count = 1000;
  s.grid_n = 128;
  const auto r = existence_boundary_sweep(s);
  EXPECT_FALSE(r.rows[0].condition_holds);
  EXPECT_TRUE(r.trends[0].monotone_growth);
}

TEST(QuadratureLadder, DiltDivergesPastTheBoundary) {
  const std::vector<double> eps{0.1, 0.05, 0.025};
  EXPECT_THROW(dilt_quadrature_ladder(0.5, MultiIndex{1, 0, 0}, eps, false), DomainError);
  const auto l = dilt_quadrature_ladder(0.5, MultiIndex{1, 0, 0}, eps, true);
  for (const auto& v : l.values) EXPECT_TRUE(v.converged);
  EXPECT_TRUE(l.trend.monotone_growth);
  EXPECT_FALSE(l.trend.stabilizing);
  EXPECT_GT(l.trend.growth_ratio, 4.0);
}

TEST(Sweep, DsltOrderOneStableInRegime) {
  SweepSettings s;
  s.kind = FunctionalKind::dslt;
  s.k = MultiIndex{1};
  s.hurst = {0.3};
  s.count = 2000;
  s.grid_n = 256;
  const auto r = existence_boundary_sweep(s);
  EXPECT_TRUE(r.rows[0].condition_holds);
  EXPECT_TRUE(r.trends[0].stabilizing);
}

}  // namespace
}  // namespace fbmlt
