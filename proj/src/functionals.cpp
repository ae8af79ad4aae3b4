#include "fbmlt/functionals.hpp"

#include <cmath>
#include <exception>
#include <nlohmann/json.hpp>

#include "fbmlt/error.hpp"
#include "fbmlt/io.hpp"
#include "fbmlt/pair_sum.hpp"

namespace fbmlt {

std::string to_string(FunctionalKind k) { return k == FunctionalKind::dslt ? "dslt" : "dilt"; }

FunctionalKind parse_functional(const std::string& name) {
  if (name == "dslt") return FunctionalKind::dslt;
  if (name == "dilt") return FunctionalKind::dilt;
  throw DomainError("unknown functional '" + name + "' (expected dslt or dilt)");
}

double dslt_estimate(const FbmPath& path, const MollifierSpec& spec) {
  if (path.dim() != spec.k.dim()) {
    throw DomainError("dslt_estimate: path dimension " + std::to_string(path.dim()) +
                      " does not match multi-index length " + std::to_string(spec.k.dim()));
  }
  const double delta = path.grid.spacing();
  return delta * delta * kernels::self_pair_sum(path.values, MollifierKernel(spec));
}

double dilt_estimate(const FbmPath& path_a, const FbmPath& path_b, const MollifierSpec& spec) {
  if (!(path_a.grid == path_b.grid)) throw DomainError("dilt_estimate: paths live on different grids");
  if (path_a.H != path_b.H) throw DomainError("dilt_estimate: paths have different Hurst parameters");
  if (path_a.dim() != path_b.dim() || path_a.dim() != spec.k.dim()) {
    throw DomainError("dilt_estimate: dimension mismatch");
  }
  const double delta = path_a.grid.spacing();
  return delta * delta * kernels::cross_pair_sum(path_a.values, path_b.values, MollifierKernel(spec));
}

std::optional<double> clt_scaling_exponent(FunctionalKind kind, const ModelConfig& config) {
  if (kind != FunctionalKind::dslt || config.k.order() != 1) return std::nullopt;
  if (config.d() == 2) return 2.0 - 1.0 / config.H;
  if (config.d() == 3) return 2.5 - 1.0 / config.H;
  return std::nullopt;
}

double grid_spatial_scale(const TimeGrid& grid, double H) { return std::pow(grid.spacing(), H); }

Resolution mollifier_resolution(double eps, const TimeGrid& grid, double H) {
  const double width = std::sqrt(eps);
  const double scale = grid_spatial_scale(grid, H);
  if (width < scale) return Resolution::unresolved;
  if (width < 3.0 * scale) return Resolution::marginal;
  return Resolution::resolved;
}

std::vector<double> Ensemble::raw_values() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.raw);
  return out;
}

std::vector<double> Ensemble::scaled_values() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.scaled);
  return out;
}

Ensemble run_ensemble(const ModelConfig& config, const MollifierSpec& spec,
                      const EnsembleSettings& settings) {
  if (settings.count < 2) throw DomainError("ensemble needs at least two samples");
  if (spec.k.dim() != config.d()) throw DomainError("mollifier multi-index does not match model dimension");
  const TimeGrid grid(config.t, settings.grid_n);
  Ensemble e{config, spec, settings, clt_scaling_exponent(settings.kind, config), {}, 0.0, 0.0};
  const double factor = e.scaling_exponent ? std::pow(spec.eps, *e.scaling_exponent) : 1.0;
  const int count = settings.count;
  e.samples.resize(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));

  // Warm the shared per-grid caches before going parallel.
  if (settings.method == SamplerMethod::cholesky) cholesky_factor(grid, config.H);

#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < count; ++i) {
    try {
      const RngStream rng(settings.seed, static_cast<std::uint64_t>(i));
      double raw = 0.0;
      if (settings.kind == FunctionalKind::dslt) {
        raw = dslt_estimate(sample_path(settings.method, grid, config.H, config.d(), rng), spec);
      } else {
        const auto [a, b] = sample_independent_pair(settings.method, grid, config.H, config.d(), rng);
        raw = dilt_estimate(a, b, spec);
      }
      e.samples[static_cast<std::size_t>(i)] = {raw, raw * factor, settings.seed,
                                                static_cast<std::uint64_t>(i)};
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (int i = 0; i < count; ++i) {
    if (!errors[static_cast<std::size_t>(i)]) continue;
    try {
      std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
    } catch (const Error& err) {
      throw Error(err.error_class(), "sample " + std::to_string(i) + ": " + err.what());
    }
  }

  double sum = 0.0;
  for (const auto& s : e.samples) sum += s.scaled;
  e.mean = sum / count;
  double ss = 0.0;
  for (const auto& s : e.samples) ss += (s.scaled - e.mean) * (s.scaled - e.mean);
  e.variance = ss / (count - 1);
  return e;
}

void write_ensemble_csv(std::ostream& os, const Ensemble& e) {
  os << "sample_index,raw,scaled,seed,stream\n";
  for (std::size_t i = 0; i < e.samples.size(); ++i) {
    const auto& s = e.samples[i];
    os << i << ',' << format_double(s.raw) << ',' << format_double(s.scaled) << ',' << s.seed << ','
       << s.stream << '\n';
  }
}

std::string ensemble_summary_json(const Ensemble& e) {
  nlohmann::ordered_json j;
  j["functional"] = to_string(e.settings.kind);
  j["H"] = e.config.H;
  j["d"] = e.config.d();
  j["k"] = e.config.k.to_string();
  j["t"] = e.config.t;
  j["epsilon"] = e.spec.eps;
  j["grid_n"] = e.settings.grid_n;
  j["sampler"] = to_string(e.settings.method);
  j["seed"] = e.settings.seed;
  j["scaling_exponent"] = e.scaling_exponent ? nlohmann::ordered_json(*e.scaling_exponent)
                                             : nlohmann::ordered_json(nullptr);
  j["count"] = e.samples.size();
  j["mean"] = e.mean;
  j["variance"] = e.variance;
  return j.dump(2) + "\n";
}

std::vector<RefinementRow> refinement_table(const ModelConfig& config, const MollifierSpec& spec,
                                            FunctionalKind kind, int coarse_n, int levels,
                                            int paths, std::uint64_t seed) {
  if (levels < 2) throw DomainError("refinement needs at least two levels");
  if (paths < 1) throw DomainError("refinement needs at least one path");
  const int fine_n = coarse_n << (levels - 1);
  const TimeGrid fine(config.t, fine_n);
  std::vector<RefinementRow> rows(static_cast<std::size_t>(levels));
  for (int l = 0; l < levels; ++l) rows[static_cast<std::size_t>(l)] = {coarse_n << l, 0.0, 0.0};

  for (int p = 0; p < paths; ++p) {
    const RngStream rng(seed, static_cast<std::uint64_t>(p));
    auto [a, b] = sample_independent_pair(SamplerMethod::cholesky, fine, config.H, config.d(), rng);
    double previous = 0.0;
    for (int l = 0; l < levels; ++l) {
      const int factor = 1 << (levels - 1 - l);
      const double est = kind == FunctionalKind::dslt
                             ? dslt_estimate(a.coarsen(factor), spec)
                             : dilt_estimate(a.coarsen(factor), b.coarsen(factor), spec);
      auto& row = rows[static_cast<std::size_t>(l)];
      row.mean_estimate += est / paths;
      if (l > 0) row.mean_abs_change += std::abs(est - previous) / paths;
      previous = est;
    }
  }
  return rows;
}

}  // namespace fbmlt
