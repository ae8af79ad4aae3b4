#include "fbmlt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "fbmlt/error.hpp"
#include "fbmlt/io.hpp"
#include "fbmlt/moments.hpp"
#include "fbmlt/spd_matrix.hpp"

namespace fbmlt {

namespace {

std::string to_string(Resolution r) {
  switch (r) {
    case Resolution::resolved: return "resolved";
    case Resolution::marginal: return "marginal";
    case Resolution::unresolved: return "unresolved";
  }
  return "unknown";
}

const char* flag(bool b) { return b ? "true" : "false"; }

void require_count(int count, int minimum, const char* what) {
  if (count < minimum) {
    throw DomainError(std::string(what) + " needs at least " + std::to_string(minimum) + " samples");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

bool CltReport::variance_approaches_sigma() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (std::abs(rows[i].variance_ratio - 1.0) > std::abs(rows[i - 1].variance_ratio - 1.0)) return false;
  }
  return true;
}

bool CltReport::passed() const {
  if (rows.empty()) return false;
  const auto& last = rows.back();
  return last.variance_ok(settings.variance_tolerance) && last.ks_ok(settings.ks_level);
}

CltReport clt_experiment(const ModelConfig& config, const CltSettings& settings) {
  if (settings.eps.empty()) throw DomainError("clt_experiment: empty eps ladder");
  if (config.k.order() != 1) throw DomainError("clt_experiment requires |k| = 1");
  if (!clt_regime(config.d(), config.H)) {
    throw DomainError("clt_experiment requires d = 2 with 1/2 < H < 1 or d = 3 with 1/2 < H < 2/3");
  }
  require_count(settings.count, 2, "clt_experiment");
  const TimeGrid grid(config.t, settings.grid_n);
  CltReport report{config, settings, sigma_constant(config.d(), config.H, config.t), {}, {}};
  for (double eps : settings.eps) {
    const auto res = mollifier_resolution(eps, grid, config.H);
    if (res == Resolution::unresolved) {
      throw DomainError("mollifier unresolved: sqrt(eps) = " + format_double(std::sqrt(eps)) +
                        " is below the grid spatial scale " + format_double(grid_spatial_scale(grid, config.H)));
    }
    if (res == Resolution::marginal) {
      report.warnings.push_back("eps = " + format_double(eps) +
                                ": sqrt(eps) is below three grid spatial scales");
    }
  }
  for (double eps : settings.eps) {
    EnsembleSettings es{FunctionalKind::dslt, settings.grid_n, settings.count, settings.seed, settings.method};
    const auto ens = run_ensemble(config, MollifierSpec(eps, config.k), es);
    auto scaled = ens.scaled_values();
    CltRow row{eps,
               settings.count,
               ens.mean,
               ens.variance,
               ens.variance / report.sigma_sq,
               ks_normal(scaled, 0.0, report.sigma_sq),
               mollifier_resolution(eps, grid, config.H),
               std::move(scaled)};
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_clt_csv(std::ostream& os, const CltReport& r) {
  os << "epsilon,count,mean,variance,sigma_sq,variance_ratio,ks_statistic,ks_p_value,resolution\n";
  for (const auto& row : r.rows) {
    os << format_double(row.eps) << ',' << row.count << ',' << format_double(row.mean) << ','
       << format_double(row.variance) << ',' << format_double(r.sigma_sq) << ','
       << format_double(row.variance_ratio) << ',' << format_double(row.ks.statistic) << ','
       << format_double(row.ks.p_value) << ',' << to_string(row.resolution) << '\n';
  }
}

std::string clt_verdict_json(const CltReport& r) {
  nlohmann::ordered_json j;
  j["experiment"] = "clt";
  j["d"] = r.config.d();
  j["H"] = r.config.H;
  j["t"] = r.config.t;
  j["grid_n"] = r.settings.grid_n;
  j["count"] = r.settings.count;
  j["seed"] = r.settings.seed;
  j["sampler"] = to_string(r.settings.method);
  j["sigma_sq"] = r.sigma_sq;
  j["variance_tolerance"] = r.settings.variance_tolerance;
  j["ks_level"] = r.settings.ks_level;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json e;
    e["epsilon"] = row.eps;
    e["variance_ratio"] = row.variance_ratio;
    e["ks_p_value"] = row.ks.p_value;
    e["variance_ok"] = row.variance_ok(r.settings.variance_tolerance);
    e["ks_ok"] = row.ks_ok(r.settings.ks_level);
    e["resolution"] = to_string(row.resolution);
    rows.push_back(e);
  }
  j["rows"] = rows;
  j["variance_approaches_sigma"] = r.variance_approaches_sigma();
  j["passed"] = r.passed();
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

double MomentGrowthReport::g_ratio(int m, int n) const {
  double gm = std::numeric_limits<double>::quiet_NaN(), gn = gm;
  for (const auto& row : rows) {
    if (row.order == m) gm = row.g;
    if (row.order == n) gn = row.g;
  }
  if (std::isnan(gm) || std::isnan(gn)) throw DomainError("g_ratio: order not tested");
  return gm / gn;
}

MomentGrowthReport moment_growth_probe(const ModelConfig& config, const MollifierSpec& spec,
                                       const MomentSettings& settings) {
  if (settings.orders.empty()) throw DomainError("moment_growth_probe: no orders");
  for (int n : settings.orders) {
    if (n < 1 || n > 4) throw DomainError("moment orders must lie in 1..4");
  }
  const bool exists = settings.kind == FunctionalKind::dilt ? config.dilt_exists() : config.dslt_exists();
  if (!exists && !settings.allow_out_of_regime) {
    throw DomainError("existence condition fails for this configuration (use the out-of-regime override)");
  }
  require_count(settings.count, 2, "moment_growth_probe");
  auto orders = settings.orders;
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());

  EnsembleSettings es{settings.kind, settings.grid_n, settings.count, settings.seed, settings.method};
  const auto raw = run_ensemble(config, spec, es).raw_values();
  MomentGrowthReport report{config, spec, settings, config.theta(), {}, true, true};
  for (int n : orders) {
    auto stat = [n](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += std::pow(std::abs(v), n);
      return s / static_cast<double>(x.size());
    };
    const auto ci = bootstrap(raw, stat, settings.resamples, settings.seed + static_cast<std::uint64_t>(n));
    const double g = std::pow(ci.estimate, 1.0 / n) / std::exp(report.theta / n * std::lgamma(n + 1.0));
    report.rows.push_back({n, ci, g, (ci.hi - ci.lo) > 0.5 * ci.estimate});
  }
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    for (std::size_t j = i + 1; j < report.rows.size(); ++j) {
      const auto& a = report.rows[i];
      const auto& b = report.rows[j];
      if (std::pow(a.ci.estimate, 1.0 / a.order) > std::pow(b.ci.hi, 1.0 / b.order)) report.lyapunov_ok = false;
      if (a.order % 2 == 1 && b.order == a.order + 1 &&
          a.ci.estimate > std::pow(b.ci.hi, static_cast<double>(a.order) / b.order)) {
        report.jensen_ok = false;
      }
    }
  }
  return report;
}

void write_moment_csv(std::ostream& os, const MomentGrowthReport& r) {
  os << "order,moment,se,ci_lo,ci_hi,g,heavy_tail\n";
  for (const auto& row : r.rows) {
    os << row.order << ',' << format_double(row.ci.estimate) << ',' << format_double(row.ci.se) << ','
       << format_double(row.ci.lo) << ',' << format_double(row.ci.hi) << ',' << format_double(row.g) << ','
       << flag(row.heavy_tail) << '\n';
  }
}

std::string moment_verdict_json(const MomentGrowthReport& r) {
  nlohmann::ordered_json j;
  j["experiment"] = "moments";
  j["functional"] = to_string(r.settings.kind);
  j["H"] = r.config.H;
  j["k"] = r.config.k.to_string();
  j["epsilon"] = r.spec.eps;
  j["grid_n"] = r.settings.grid_n;
  j["count"] = r.settings.count;
  j["seed"] = r.settings.seed;
  j["theta"] = r.theta;
  j["lyapunov_ok"] = r.lyapunov_ok;
  j["jensen_ok"] = r.jensen_ok;
  bool heavy = false;
  for (const auto& row : r.rows) heavy = heavy || row.heavy_tail;
  j["heavy_tail"] = heavy;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

bool ExpIntegrabilityReport::stable() const {
  for (const auto& row : rows)
    if (!row.stable) return false;
  return !rows.empty();
}

ExpRow exp_prefix_row(std::span<const double> values, double beta, double m, double tolerance) {
  const int n = static_cast<int>(values.size());
  if (n < 4) throw DomainError("exp_prefix_row needs at least four values");
  ExpRow row{m, {n / 4, n / 2, n}, {}, true, false};
  for (std::size_t p = 0; p < 3; ++p) {
    const auto prefix = values.first(static_cast<std::size_t>(row.prefix[p]));
    std::vector<double> expo;
    expo.reserve(prefix.size());
    for (double v : prefix) expo.push_back(m * std::pow(std::abs(v), beta));
    const double top = *std::max_element(expo.begin(), expo.end());
    double acc = 0.0;
    for (double e : expo) acc += std::exp(e - top);
    row.log_mean[p] = top + std::log(acc) - std::log(static_cast<double>(prefix.size()));
    if (!std::isfinite(row.log_mean[p]) || row.log_mean[p] > std::log(std::numeric_limits<double>::max())) {
      row.finite = false;
    }
  }
  row.stable = row.finite && std::abs(std::expm1(row.log_mean[2] - row.log_mean[1])) <= tolerance;
  return row;
}

ExpIntegrabilityReport exp_integrability_probe(const ModelConfig& config, const MollifierSpec& spec,
                                               const ExpSettings& settings) {
  if (settings.m_ladder.empty()) throw DomainError("exp_integrability_probe: empty M ladder");
  if (settings.beta < 0.0) throw DomainError("beta must be non-negative");
  require_count(settings.count, 4, "exp_integrability_probe");
  EnsembleSettings es{settings.kind, settings.grid_n, settings.count, settings.seed, settings.method};
  const auto raw = run_ensemble(config, spec, es).raw_values();
  ExpIntegrabilityReport report{config, spec, settings, config.beta_max(),
                                settings.beta < config.beta_max(), {}};
  for (double m : settings.m_ladder) {
    report.rows.push_back(exp_prefix_row(raw, settings.beta, m, settings.stability_tolerance));
  }
  return report;
}

void write_exp_csv(std::ostream& os, const ExpIntegrabilityReport& r) {
  os << "M,prefix_1,prefix_2,prefix_3,log_mean_1,log_mean_2,log_mean_3,finite,stable\n";
  for (const auto& row : r.rows) {
    os << format_double(row.m);
    for (int p : row.prefix) os << ',' << p;
    for (double l : row.log_mean) os << ',' << format_double(l);
    os << ',' << flag(row.finite) << ',' << flag(row.stable) << '\n';
  }
}

// ---------------------------------------------------------------------------

LndReport lnd_probe(double H, std::span<const int> grid_sizes, std::span<const double> radii) {
  require_hurst(H);
  if (grid_sizes.empty() || radii.empty()) throw DomainError("lnd_probe: empty grid or radius list");
  LndReport report{H, {}, std::numeric_limits<double>::infinity()};
  for (int n : grid_sizes) {
    if (n < 1) throw DomainError("lnd_probe: grid sizes must be positive");
    const TimeGrid grid(1.0, n);
    const auto times = grid.times();
    const SpdMatrix cov(fbm_gram(times, H));
    for (double r : radii) {
      if (!(r > 0.0)) throw DomainError("lnd_probe: radii must be positive");
      LndRow row{n, r, std::numeric_limits<double>::infinity(), 0.0};
      for (int i = 0; i < n; ++i) {
        std::vector<int> given;
        for (int j = 0; j < n; ++j) {
          if (std::abs(times[static_cast<std::size_t>(j)] - times[static_cast<std::size_t>(i)]) > r) given.push_back(j);
        }
        const double ratio = conditional_variance(cov, i, given) / std::pow(r, 2.0 * H);
        if (ratio < row.min_ratio) {
          row.min_ratio = ratio;
          row.argmin_time = times[static_cast<std::size_t>(i)];
        }
      }
      report.kappa = std::min(report.kappa, row.min_ratio);
      report.rows.push_back(row);
    }
  }
  return report;
}

void write_lnd_csv(std::ostream& os, const LndReport& r) {
  os << "n,r,min_ratio,argmin_time\n";
  for (const auto& row : r.rows) {
    os << row.n << ',' << format_double(row.r) << ',' << format_double(row.min_ratio) << ','
       << format_double(row.argmin_time) << '\n';
  }
}

// ---------------------------------------------------------------------------

Trend classify_trend(std::span<const double> values) {
  Trend t{values.size() >= 2, values.size() >= 3, 1.0};
  if (values.empty()) return t;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) t.monotone_growth = false;
  }
  for (std::size_t i = 2; i < values.size(); ++i) {
    if (!(std::abs(values[i] - values[i - 1]) < std::abs(values[i - 1] - values[i - 2]))) t.stabilizing = false;
  }
  t.growth_ratio = values.back() / values.front();
  return t;
}

SweepReport existence_boundary_sweep(const SweepSettings& settings) {
  if (settings.hurst.empty() || settings.eps.empty()) throw DomainError("sweep: empty H or eps ladder");
  require_count(settings.count, 2, "existence_boundary_sweep");
  SweepReport report{settings, {}, {}};
  for (double H : settings.hurst) {
    const ModelConfig config(H, settings.k, 1.0);
    const bool holds = settings.kind == FunctionalKind::dilt ? config.dilt_exists() : config.dslt_exists();
    std::vector<double> variances;
    for (double eps : settings.eps) {
      EnsembleSettings es{settings.kind, settings.grid_n, settings.count, settings.seed, settings.method};
      const auto raw = run_ensemble(config, MollifierSpec(eps, settings.k), es).raw_values();
      const double mean = sample_mean(raw);
      const double var = sample_variance(raw);
      report.rows.push_back({H, eps, holds, mean, var, settings.count});
      variances.push_back(var);
    }
    report.trends.push_back(classify_trend(variances));
  }
  return report;
}

void write_sweep_csv(std::ostream& os, const SweepReport& r) {
  os << "H,epsilon,condition_holds,mean,variance,count\n";
  for (const auto& row : r.rows) {
    os << format_double(row.H) << ',' << format_double(row.eps) << ',' << flag(row.condition_holds) << ','
       << format_double(row.mean) << ',' << format_double(row.variance) << ',' << row.count << '\n';
  }
}

std::string sweep_verdict_json(const SweepReport& r) {
  nlohmann::ordered_json j;
  j["experiment"] = "sweep";
  j["functional"] = to_string(r.settings.kind);
  j["k"] = r.settings.k.to_string();
  j["grid_n"] = r.settings.grid_n;
  j["count"] = r.settings.count;
  j["seed"] = r.settings.seed;
  auto trends = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.trends.size(); ++i) {
    nlohmann::ordered_json e;
    e["H"] = r.settings.hurst[i];
    e["condition_holds"] = r.rows[i * r.settings.eps.size()].condition_holds;
    e["monotone_growth"] = r.trends[i].monotone_growth;
    e["stabilizing"] = r.trends[i].stabilizing;
    e["growth_ratio"] = r.trends[i].growth_ratio;
    trends.push_back(e);
  }
  j["trends"] = trends;
  return j.dump(2) + "\n";
}

QuadratureLadder dilt_quadrature_ladder(double H, const MultiIndex& k, std::span<const double> eps,
                                        bool allow_out_of_regime) {
  QuadratureLadder out{H, k, {eps.begin(), eps.end()}, {}, {}};
  DiltMomentOptions opts;
  opts.allow_out_of_regime = allow_out_of_regime;
  std::vector<double> values;
  for (double e : eps) {
    out.values.push_back(dilt_second_moment(e, H, k, opts));
    values.push_back(out.values.back().value);
  }
  out.trend = classify_trend(values);
  return out;
}

}  // namespace fbmlt
