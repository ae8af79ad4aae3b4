#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fbmlt/fbm.hpp"
#include "fbmlt/model.hpp"

namespace fbmlt {

/// Self-intersection (one path, ordered pairs) or intersection (two independent paths).
enum class FunctionalKind { dslt, dilt };

std::string to_string(FunctionalKind k);
FunctionalKind parse_functional(const std::string& name);

/// Delta^2 * sum_{i<j} delta_eps^(k)(B_{t_j} - B_{t_i}); the diagonal i = j is excluded.
double dslt_estimate(const FbmPath& path, const MollifierSpec& spec);

/// Delta^2 * sum_{i,j} delta_eps^(k)(B_{t_i} - Bhat_{t_j}) over the full grid square.
double dilt_estimate(const FbmPath& path_a, const FbmPath& path_b, const MollifierSpec& spec);

/// Exponent p in scaled = eps^p * raw: 2 - 1/H (d = 2) or 5/2 - 1/H (d = 3)
/// for the first-order self-intersection functional; nullopt otherwise.
std::optional<double> clt_scaling_exponent(FunctionalKind kind, const ModelConfig& config);

/// One-step spatial scale Delta^H of a grid path.
double grid_spatial_scale(const TimeGrid& grid, double H);

enum class Resolution { resolved, marginal, unresolved };

/// resolved if sqrt(eps) >= 3 Delta^H, unresolved if sqrt(eps) < Delta^H.
Resolution mollifier_resolution(double eps, const TimeGrid& grid, double H);

struct FunctionalSample {
  double raw;
  double scaled;
  std::uint64_t seed;
  std::uint64_t stream;
};

struct EnsembleSettings {
  FunctionalKind kind = FunctionalKind::dslt;
  int grid_n = 256;
  int count = 100;
  std::uint64_t seed = 1;
  SamplerMethod method = SamplerMethod::cholesky;
};

struct Ensemble {
  ModelConfig config;
  MollifierSpec spec;
  EnsembleSettings settings;
  std::optional<double> scaling_exponent;
  std::vector<FunctionalSample> samples;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance of the scaled values

  std::vector<double> raw_values() const;
  std::vector<double> scaled_values() const;
};

/// N i.i.d. samples, sample i drawn from RngStream(seed, i); parallel over i
/// with results stored by index, so the output does not depend on the schedule.
Ensemble run_ensemble(const ModelConfig& config, const MollifierSpec& spec,
                      const EnsembleSettings& settings);

/// CSV: sample_index,raw,scaled,seed,stream
void write_ensemble_csv(std::ostream& os, const Ensemble& e);
/// JSON summary: mean, variance, count and a config echo.
std::string ensemble_summary_json(const Ensemble& e);

struct RefinementRow {
  int n;
  double mean_estimate;
  double mean_abs_change;  // mean |estimate(n) - estimate(n/2)| over paths; 0 for the coarsest level
};

/// Grid refinement with common random numbers: each path is sampled on the
/// finest grid and restricted to the coarser ones.
std::vector<RefinementRow> refinement_table(const ModelConfig& config, const MollifierSpec& spec,
                                            FunctionalKind kind, int coarse_n, int levels,
                                            int paths, std::uint64_t seed);

}  // namespace fbmlt
