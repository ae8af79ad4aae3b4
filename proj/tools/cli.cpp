#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "fbmlt/error.hpp"
#include "fbmlt/experiments.hpp"
#include "fbmlt/fbm.hpp"
#include "fbmlt/functionals.hpp"
#include "fbmlt/io.hpp"
#include "fbmlt/moments.hpp"
#include "fbmlt/verification.hpp"

#ifndef FBMLT_VERSION
#define FBMLT_VERSION "unknown"
#endif

namespace fbmlt::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Artifact {
  std::string name;
  std::string content;
};

class ArtifactWriter {
 public:
  ArtifactWriter(fs::path dir, std::string command, std::string config_echo)
      : dir_(std::move(dir)), command_(std::move(command)), echo_(std::move(config_echo)), start_(Clock::now()) {}

  void add(std::string name, std::string content) { items_.push_back({std::move(name), std::move(content)}); }

  /// Writes every artifact, then the manifest.
  void commit(std::ostream& out) {
    nlohmann::ordered_json files = nlohmann::ordered_json::array();
    for (const auto& a : items_) {
      write_file_atomic(dir_ / a.name, a.content);
      nlohmann::ordered_json f;
      f["file"] = a.name;
      f["bytes"] = a.content.size();
      f["sha256"] = sha256_hex(a.content);
      files.push_back(f);
      out << "wrote " << (dir_ / a.name).string() << '\n';
    }
    nlohmann::ordered_json m;
    m["command"] = command_;
    m["library_version"] = FBMLT_VERSION;
    m["config"] = echo_;
    m["artifacts"] = files;
    m["wall_time_seconds"] = std::chrono::duration<double>(Clock::now() - start_).count();
    const auto name = command_ + "_manifest.json";
    write_file_atomic(dir_ / name, m.dump(2) + "\n");
    out << "wrote " << (dir_ / name).string() << '\n';
  }

 private:
  fs::path dir_;
  std::string command_;
  std::string echo_;
  Clock::time_point start_;
  std::vector<Artifact> items_;
};

std::string default_out_dir() {
  if (const char* env = std::getenv("FBMLT_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return "fbmlt_out";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void warn(std::ostream& err, const std::string& msg) { err << "warning: " << msg << '\n'; }

std::vector<double> default_hurst_grid(int d) {
  if (d == 3) return {0.55, 0.6};
  return {0.55, 0.6, 0.75, 0.9};
}

// ---------------------------------------------------------------------------

int cmd_constants(const ConstantsArgs& a, ArtifactWriter& w, std::ostream& out, std::ostream& err) {
  if (a.d != 2 && a.d != 3) throw DomainError("constants: --d must be 2 or 3");
  const auto hurst = a.hurst.empty() ? default_hurst_grid(a.d) : a.hurst;
  bool all_converged = true;
  std::ostringstream table;
  table << "d,H,t,sigma_sq_closed,sigma_sq_quadrature,rel_gap,status\n";
  out << "d  H       t       sigma^2 (closed)        sigma^2 (quadrature)    rel gap    status\n";
  for (double H : hurst) {
    if (!clt_regime(a.d, H)) {
      table << a.d << ',' << format_double(H) << ',' << format_double(a.t) << ",,,,out-of-regime\n";
      out << a.d << "  " << fmt(H) << "  " << fmt(a.t) << "  out-of-regime\n";
      continue;
    }
    const double closed = sigma_constant(a.d, H, a.t);
    const auto quad = limiting_integral(a.d, H, a.t);
    all_converged = all_converged && quad.converged;
    const double gap = std::abs(quad.value / closed - 1.0);
    const char* status = quad.converged ? "ok" : "not-converged";
    table << a.d << ',' << format_double(H) << ',' << format_double(a.t) << ',' << format_double(closed) << ','
          << format_double(quad.value) << ',' << format_double(gap) << ',' << status << '\n';
    out << a.d << "  " << fmt(H) << "  " << fmt(a.t) << "  " << format_double(closed) << "  "
        << format_double(quad.value) << "  " << fmt(gap) << "  " << status << '\n';
  }
  w.add("constants.csv", table.str());

  if (!a.eps.empty()) {
    MomentOptions opts;
    opts.eval_budget = a.budget;
    opts.rel_tol = a.rel_tol;
    std::ostringstream rep;
    rep << "d,H,t,epsilon,V1,V2,V3,Vsum_scaled,Vtilde3_scaled,sigma_sq,abs_err\n";
    for (double H : hurst) {
      if (!clt_regime(a.d, H)) {
        warn(err, "H = " + fmt(H) + " is outside the CLT regime; no V report row");
        continue;
      }
      const double sigma = sigma_constant(a.d, H, a.t);
      for (double eps : a.eps) {
        const auto v = v_decomposition(eps, H, a.t, a.d, opts);
        if (!v.converged()) {
          all_converged = false;
          warn(err, "V integrals at H = " + fmt(H) + ", eps = " + fmt(eps) + " did not converge within budget");
        }
        const double sc = v.scale();
        rep << a.d << ',' << format_double(H) << ',' << format_double(a.t) << ',' << format_double(eps) << ','
            << format_double(v.v[0].value) << ',' << format_double(v.v[1].value) << ','
            << format_double(v.v[2].value) << ',' << format_double(sc * v.v_sum()) << ','
            << format_double(sc * v.vtilde[2].value) << ',' << format_double(sigma) << ','
            << format_double(v.abs_error()) << '\n';
        out << "H=" << fmt(H) << " eps=" << fmt(eps) << "  scaled V-sum / sigma^2 = " << fmt(sc * v.v_sum() / sigma)
            << "  scaled Vtilde3 / sigma^2 = " << fmt(sc * v.vtilde[2].value / sigma) << '\n';
      }
    }
    w.add("v_report.csv", rep.str());
  }
  w.commit(out);
  return all_converged ? kExitOk : kExitNumerical;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  LemmaSuiteOptions opts;
  opts.seed = a.seed;
  opts.include_n1_gamma = a.include_n1_gamma;
  const auto ledger = verify_lemmas(opts);
  ledger.print(out);
  const bool ok = ledger.all_passed();
  out << (ok ? "all lemma checks passed\n" : "lemma checks FAILED\n");
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_clt(const CltArgs& a, ArtifactWriter& w, std::ostream& out, std::ostream& err) {
  const ModelConfig config(a.H, MultiIndex::leading(a.d, 1), a.t);
  CltSettings s;
  s.eps = a.eps;
  s.grid_n = a.n;
  s.count = a.count;
  s.seed = a.seed;
  s.method = parse_sampler(a.sampler);
  s.variance_tolerance = a.variance_tolerance;
  s.ks_level = a.ks_level;
  const auto report = clt_experiment(config, s);
  for (const auto& msg : report.warnings) warn(err, msg);

  std::ostringstream csv, samples;
  write_clt_csv(csv, report);
  samples << "epsilon,sample_index,scaled\n";
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.scaled.size(); ++i) {
      samples << format_double(row.eps) << ',' << i << ',' << format_double(row.scaled[i]) << '\n';
    }
  }
  w.add("clt.csv", csv.str());
  w.add("clt_samples.csv", samples.str());
  w.add("clt_verdict.json", clt_verdict_json(report));
  out << "sigma^2 = " << format_double(report.sigma_sq) << '\n';
  for (const auto& row : report.rows) {
    out << "eps=" << fmt(row.eps) << "  variance/sigma^2=" << fmt(row.variance_ratio) << "  KS D=" << fmt(row.ks.statistic)
        << "  p=" << fmt(row.ks.p_value) << '\n';
  }
  out << "verdict: " << (report.passed() ? "pass" : "fail") << '\n';
  w.commit(out);
  return a.check && !report.passed() ? kExitCheckFailed : kExitOk;
}

int cmd_moments(const MomentsArgs& a, bool allow_oor, ArtifactWriter& w, std::ostream& out, std::ostream& err) {
  const ModelConfig config(a.H, parse_multi_index(a.k), a.t);
  const MollifierSpec spec(a.eps, config.k);
  MomentSettings ms;
  ms.kind = parse_functional(a.functional);
  ms.orders = a.orders;
  ms.grid_n = a.n;
  ms.count = a.count;
  ms.seed = a.seed;
  ms.method = parse_sampler(a.sampler);
  ms.resamples = a.resamples;
  ms.allow_out_of_regime = allow_oor;
  const auto growth = moment_growth_probe(config, spec, ms);

  ExpSettings es;
  es.kind = ms.kind;
  es.beta = a.beta_fraction * config.beta_max();
  es.m_ladder = a.m_ladder;
  es.grid_n = a.n;
  es.count = a.count;
  es.seed = a.seed;
  es.method = ms.method;
  const auto expo = exp_integrability_probe(config, spec, es);
  if (!expo.in_regime) warn(err, "beta >= beta_max: exponential integrability is not claimed here");

  std::ostringstream mcsv, ecsv;
  write_moment_csv(mcsv, growth);
  write_exp_csv(ecsv, expo);
  auto verdict = nlohmann::ordered_json::parse(moment_verdict_json(growth));
  verdict["beta"] = es.beta;
  verdict["beta_max"] = expo.beta_max;
  verdict["exp_prefix_stable"] = expo.stable();
  verdict["exp_note"] = "prefix stability is a necessary check only; it cannot establish integrability";
  w.add("moments.csv", mcsv.str());
  w.add("exp_integrability.csv", ecsv.str());
  w.add("moments_verdict.json", verdict.dump(2) + "\n");
  for (const auto& row : growth.rows) {
    out << "n=" << row.order << "  E|a|^n=" << fmt(row.ci.estimate) << "  [" << fmt(row.ci.lo) << ", " << fmt(row.ci.hi)
        << "]  g=" << fmt(row.g) << (row.heavy_tail ? "  heavy-tail" : "") << '\n';
  }
  out << "lyapunov " << (growth.lyapunov_ok ? "ok" : "violated") << ", jensen " << (growth.jensen_ok ? "ok" : "violated")
      << ", exp prefix " << (expo.stable() ? "stable" : "unstable") << '\n';
  w.commit(out);
  return kExitOk;
}

int cmd_sweep(const SweepArgs& a, bool allow_oor, ArtifactWriter& w, std::ostream& out) {
  SweepSettings s;
  s.kind = parse_functional(a.functional);
  s.k = parse_multi_index(a.k);
  s.hurst = a.hurst;
  s.eps = a.eps;
  s.grid_n = a.n;
  s.count = a.count;
  s.seed = a.seed;
  s.method = parse_sampler(a.sampler);
  const auto report = existence_boundary_sweep(s);
  std::ostringstream csv;
  write_sweep_csv(csv, report);
  w.add("sweep.csv", csv.str());
  w.add("sweep_verdict.json", sweep_verdict_json(report));
  for (std::size_t i = 0; i < report.trends.size(); ++i) {
    const auto& tr = report.trends[i];
    out << "H=" << fmt(a.hurst[i]) << "  growth ratio " << fmt(tr.growth_ratio)
        << (tr.monotone_growth ? "  monotone growth" : "") << (tr.stabilizing ? "  stabilizing" : "") << '\n';
  }
  if (a.quadrature) {
    if (s.kind != FunctionalKind::dilt) throw DomainError("--quadrature applies to the dilt functional only");
    std::ostringstream q;
    q << "H,epsilon,value,abs_error,evals,converged\n";
    for (double H : a.hurst) {
      const auto ladder = dilt_quadrature_ladder(H, s.k, a.eps, allow_oor);
      for (std::size_t i = 0; i < ladder.eps.size(); ++i) {
        const auto& r = ladder.values[i];
        q << format_double(H) << ',' << format_double(ladder.eps[i]) << ',' << format_double(r.value) << ','
          << format_double(r.abs_error) << ',' << r.evals << ',' << (r.converged ? "true" : "false") << '\n';
      }
    }
    w.add("sweep_quadrature.csv", q.str());
  }
  w.commit(out);
  return kExitOk;
}

int cmd_sample(const SampleArgs& a, ArtifactWriter& w, std::ostream& out) {
  const TimeGrid grid(a.t, a.n);
  const auto method = parse_sampler(a.sampler);
  const auto path = sample_path(method, grid, a.H, a.d, RngStream(a.seed, 0));
  std::ostringstream csv;
  write_path_csv(csv, path);
  if (!a.dump.empty()) {
    write_file_atomic(a.dump, csv.str());
    out << "wrote " << a.dump << '\n';
  } else {
    w.add("path.csv", csv.str());
  }
  if (a.refine_levels > 0) {
    const MultiIndex k = a.k.empty() ? MultiIndex::leading(a.d, 1) : parse_multi_index(a.k);
    const ModelConfig config(a.H, k, a.t);
    const auto rows = refinement_table(config, MollifierSpec(a.eps, k), parse_functional(a.functional), a.n,
                                       a.refine_levels, a.refine_paths, a.seed);
    std::ostringstream r;
    r << "n,mean_estimate,mean_abs_change\n";
    for (const auto& row : rows) {
      r << row.n << ',' << format_double(row.mean_estimate) << ',' << format_double(row.mean_abs_change) << '\n';
      out << "n=" << row.n << "  mean=" << fmt(row.mean_estimate) << "  mean |change|=" << fmt(row.mean_abs_change) << '\n';
    }
    w.add("refinement.csv", r.str());
  }
  w.commit(out);
  return kExitOk;
}

int cmd_dilt(const DiltMomentArgs& a, ArtifactWriter& w, std::ostream& out, std::ostream& err) {
  const MultiIndex k = parse_multi_index(a.k);
  const ModelConfig config(a.H, k, 1.0);
  if (!config.dilt_exists()) {
    if (!a.allow_out_of_regime) {
      throw DomainError("2|k|H + Hd >= 2: pass --allow-out-of-regime to integrate anyway");
    }
    warn(err, "existence condition fails; the integral is expected to grow as eps decreases");
  }
  DiltMomentOptions opts;
  opts.rel_tol = a.rel_tol;
  opts.eval_budget = a.budget;
  opts.allow_out_of_regime = a.allow_out_of_regime;
  bool converged = true;
  std::ostringstream csv;
  csv << "H,k,epsilon,value,abs_error,evals,converged\n";
  for (double eps : a.eps) {
    const auto r = dilt_second_moment(eps, a.H, k, opts);
    converged = converged && r.converged;
    csv << format_double(a.H) << ",\"" << k.to_string() << "\"," << format_double(eps) << ',' << format_double(r.value)
        << ',' << format_double(r.abs_error) << ',' << r.evals << ',' << (r.converged ? "true" : "false") << '\n';
    out << "eps=" << fmt(eps) << "  E[alpha^2]=" << format_double(r.value) << "  +/- " << fmt(r.abs_error)
        << (r.converged ? "" : "  (not converged)") << '\n';
  }
  w.add("dilt_moment.csv", csv.str());
  w.commit(out);
  return converged ? kExitOk : kExitNumerical;
}

template <class T>
CLI::Option* add_list(CLI::App* app, const std::string& name, std::vector<T>& v, const std::string& help) {
  return app->add_option(name, v, help)->delimiter(',');
}

}  // namespace

std::unique_ptr<CLI::App> build_app(RunConfig& cfg) {
  auto app = std::make_unique<CLI::App>("Derivative self-intersection and intersection local time of fBm", "fbmlt");
  app->option_defaults()->always_capture_default();
  app->set_version_flag("--version", FBMLT_VERSION);
  app->set_config("--config", "", "Read options from a TOML/INI file; command-line flags override it");
  app->add_option("--out-dir", cfg.out_dir, "Artifact directory (default: $FBMLT_OUT_DIR, else fbmlt_out)");
  app->add_option("--threads", cfg.threads, "OpenMP worker count, 0 for the runtime default")->check(CLI::NonNegativeNumber);
  app->require_subcommand(1, 1);
  app->fallthrough();

  auto* c = app->add_subcommand("constants", "Limiting variance constants: closed form vs quadrature");
  c->add_option("--d", cfg.constants.d, "Spatial dimension (2 or 3)");
  add_list(c, "--H", cfg.constants.hurst, "Hurst parameters (default grid 0.55,0.6,0.75,0.9 for d=2; 0.55,0.6 for d=3)");
  c->add_option("--t", cfg.constants.t, "Time horizon")->check(CLI::PositiveNumber);
  add_list(c, "--eps", cfg.constants.eps, "Also tabulate V1,V2,V3 and the first-chaos term at these eps");
  c->add_option("--budget", cfg.constants.budget, "Integrand evaluations per V integral");
  c->add_option("--rel-tol", cfg.constants.rel_tol, "Relative tolerance of the V integrals");

  auto* v = app->add_subcommand("verify-lemmas", "Pass/fail ledger of the supporting lemmas");
  v->add_option("--seed", cfg.verify.seed, "Seed of the randomized suites");
  v->add_flag("--include-n1-gamma", cfg.verify.include_n1_gamma, "Also report the n=1 Gamma-bound counterexample");

  auto* k = app->add_subcommand("clt", "Fixed-eps CLT surrogate for the first-order self-intersection functional");
  k->add_option("--d", cfg.clt.d, "Spatial dimension (2 or 3)");
  k->add_option("--H", cfg.clt.H, "Hurst parameter");
  k->add_option("--t", cfg.clt.t, "Time horizon")->check(CLI::PositiveNumber);
  add_list(k, "--eps", cfg.clt.eps, "Mollifier bandwidth ladder");
  k->add_option("--n", cfg.clt.n, "Grid size")->check(CLI::PositiveNumber);
  k->add_option("--N", cfg.clt.count, "Sample count")->check(CLI::PositiveNumber);
  k->add_option("--seed", cfg.clt.seed, "Master seed");
  k->add_option("--sampler", cfg.clt.sampler, "cholesky or circulant")->check(CLI::IsMember({"cholesky", "circulant"}));
  k->add_option("--variance-tolerance", cfg.clt.variance_tolerance, "Allowed |variance/sigma^2 - 1|");
  k->add_option("--ks-level", cfg.clt.ks_level, "KS significance level");
  k->add_flag("--check", cfg.clt.check, "Exit with code 3 when the verdict fails");

  auto* m = app->add_subcommand("moments", "Moment growth and exponential-integrability probes");
  m->add_option("--functional", cfg.moments.functional, "dilt or dslt")->check(CLI::IsMember({"dilt", "dslt"}));
  m->add_option("--H", cfg.moments.H, "Hurst parameter");
  m->add_option("--k", cfg.moments.k, "Derivative multi-index, e.g. 1,0");
  m->add_option("--t", cfg.moments.t, "Time horizon")->check(CLI::PositiveNumber);
  m->add_option("--eps", cfg.moments.eps, "Mollifier bandwidth")->check(CLI::PositiveNumber);
  m->add_option("--n", cfg.moments.n, "Grid size")->check(CLI::PositiveNumber);
  m->add_option("--N", cfg.moments.count, "Sample count")->check(CLI::PositiveNumber);
  m->add_option("--seed", cfg.moments.seed, "Master seed");
  m->add_option("--sampler", cfg.moments.sampler, "cholesky or circulant")->check(CLI::IsMember({"cholesky", "circulant"}));
  add_list(m, "--orders", cfg.moments.orders, "Moment orders in 1..4");
  m->add_option("--beta-fraction", cfg.moments.beta_fraction, "beta as a fraction of beta_max");
  add_list(m, "--M", cfg.moments.m_ladder, "Exponential weights M");
  m->add_option("--resamples", cfg.moments.resamples, "Bootstrap resamples");
  m->add_flag("--allow-out-of-regime", cfg.moments.allow_out_of_regime, "Run even when the existence condition fails");

  auto* s = app->add_subcommand("sweep", "Existence-boundary sweep over H and eps");
  s->add_option("--functional", cfg.sweep.functional, "dilt or dslt")->check(CLI::IsMember({"dilt", "dslt"}));
  s->add_option("--k", cfg.sweep.k, "Derivative multi-index");
  add_list(s, "--H", cfg.sweep.hurst, "Hurst ladder");
  add_list(s, "--eps", cfg.sweep.eps, "Decreasing eps ladder");
  s->add_option("--n", cfg.sweep.n, "Grid size")->check(CLI::PositiveNumber);
  s->add_option("--N", cfg.sweep.count, "Sample count per cell")->check(CLI::PositiveNumber);
  s->add_option("--seed", cfg.sweep.seed, "Master seed");
  s->add_option("--sampler", cfg.sweep.sampler, "cholesky or circulant")->check(CLI::IsMember({"cholesky", "circulant"}));
  s->add_flag("--quadrature", cfg.sweep.quadrature, "Also integrate the second moment by quadrature (dilt)");
  s->add_flag("--allow-out-of-regime", cfg.dilt.allow_out_of_regime, "Integrate past the existence boundary");

  auto* p = app->add_subcommand("sample", "Sample one fBm path; optional grid-refinement table");
  p->add_option("--H", cfg.sample.H, "Hurst parameter");
  p->add_option("--d", cfg.sample.d, "Spatial dimension")->check(CLI::PositiveNumber);
  p->add_option("--t", cfg.sample.t, "Time horizon")->check(CLI::PositiveNumber);
  p->add_option("--n", cfg.sample.n, "Grid size")->check(CLI::PositiveNumber);
  p->add_option("--seed", cfg.sample.seed, "Master seed");
  p->add_option("--sampler", cfg.sample.sampler, "cholesky or circulant")->check(CLI::IsMember({"cholesky", "circulant"}));
  p->add_option("--dump", cfg.sample.dump, "Write the path CSV here instead of the artifact directory");
  p->add_option("--refine-levels", cfg.sample.refine_levels, "Grid doublings in the refinement table (0: none)");
  p->add_option("--refine-paths", cfg.sample.refine_paths, "Paths averaged in the refinement table");
  p->add_option("--eps", cfg.sample.eps, "Mollifier bandwidth for the refinement table")->check(CLI::PositiveNumber);
  p->add_option("--functional", cfg.sample.functional, "dslt or dilt")->check(CLI::IsMember({"dilt", "dslt"}));
  p->add_option("--k", cfg.sample.k, "Multi-index for the refinement table (default 1,0,...,0)");

  auto* q = app->add_subcommand("dilt-moment", "Second moment of the intersection functional by 4-d quadrature");
  q->add_option("--H", cfg.dilt.H, "Hurst parameter");
  q->add_option("--k", cfg.dilt.k, "Derivative multi-index with |k| <= 1; its length is d");
  add_list(q, "--eps", cfg.dilt.eps, "eps ladder");
  q->add_option("--rel-tol", cfg.dilt.rel_tol, "Relative tolerance");
  q->add_option("--budget", cfg.dilt.budget, "Integrand evaluation budget");
  q->add_flag("--allow-out-of-regime", cfg.dilt.allow_out_of_regime, "Integrate past the existence boundary");
  return app;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  auto app = build_app(cfg);
  std::vector<std::string> storage{"fbmlt"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app->parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app->exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }
  auto* sub = app->get_subcommands().front();
  cfg.command = sub->get_name();
  if (cfg.out_dir.empty()) cfg.out_dir = default_out_dir();
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

  try {
    ArtifactWriter w(cfg.out_dir, cfg.command, sub->config_to_str(true, false));
    if (cfg.command == "constants") return cmd_constants(cfg.constants, w, out, err);
    if (cfg.command == "verify-lemmas") return cmd_verify(cfg.verify, out);
    if (cfg.command == "clt") return cmd_clt(cfg.clt, w, out, err);
    if (cfg.command == "moments") return cmd_moments(cfg.moments, cfg.moments.allow_out_of_regime, w, out, err);
    if (cfg.command == "sweep") return cmd_sweep(cfg.sweep, cfg.dilt.allow_out_of_regime, w, out);
    if (cfg.command == "sample") return cmd_sample(cfg.sample, w, out);
    if (cfg.command == "dilt-moment") return cmd_dilt(cfg.dilt, w, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.error_class() == ErrorClass::validation ? kExitValidation : kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  err << "error: unknown command " << cfg.command << '\n';
  return kExitValidation;
}

}  // namespace fbmlt::cli
