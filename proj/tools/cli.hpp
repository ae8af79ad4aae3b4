#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace CLI {
class App;
}

namespace fbmlt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitCheckFailed = 3;

struct ConstantsArgs {
  int d = 2;
  std::vector<double> hurst;  // empty: the default grid for d
  double t = 1.0;
  std::vector<double> eps;    // non-empty: also write the V-decomposition report
  std::size_t budget = 20'000'000;
  double rel_tol = 1e-6;
};

struct VerifyArgs {
  std::uint64_t seed = 7;
  bool include_n1_gamma = false;
};

struct CltArgs {
  int d = 2;
  double H = 0.75;
  double t = 1.0;
  std::vector<double> eps{0.05};
  int n = 256;
  int count = 2000;
  std::uint64_t seed = 42;
  std::string sampler = "cholesky";
  double variance_tolerance = 0.25;
  double ks_level = 0.01;
  bool check = false;
};

struct MomentsArgs {
  std::string functional = "dilt";
  double H = 0.5;
  std::string k = "0";
  double t = 1.0;
  double eps = 0.1;
  int n = 128;
  int count = 10000;
  std::uint64_t seed = 1;
  std::string sampler = "cholesky";
  std::vector<int> orders{1, 2, 3, 4};
  double beta_fraction = 0.5;  // beta = fraction * beta_max
  std::vector<double> m_ladder{0.1};
  int resamples = 1000;
  bool allow_out_of_regime = false;
};

struct SweepArgs {
  std::string functional = "dilt";
  std::string k = "0";
  std::vector<double> hurst{0.3, 0.5, 0.7};
  std::vector<double> eps{0.1, 0.05, 0.025};
  int n = 128;
  int count = 1000;
  std::uint64_t seed = 1;
  std::string sampler = "cholesky";
  bool quadrature = false;
};

struct SampleArgs {
  double H = 0.75;
  int d = 1;
  double t = 1.0;
  int n = 64;
  std::uint64_t seed = 1;
  std::string sampler = "cholesky";
  std::string dump;
  int refine_levels = 0;
  int refine_paths = 20;
  double eps = 0.05;
  std::string functional = "dslt";
  std::string k;  // empty: (1, 0, ..., 0) of length d
};

struct DiltMomentArgs {
  double H = 0.3;
  std::string k = "1";
  std::vector<double> eps{0.1, 0.05, 0.025};
  double rel_tol = 3e-4;
  std::size_t budget = 2'000'000'000;
  bool allow_out_of_regime = false;
};

/// Everything a run needs; flags map one-to-one onto these fields.
struct RunConfig {
  std::string command;
  std::string out_dir;  // default: $FBMLT_OUT_DIR, else "fbmlt_out"
  int threads = 0;      // 0: OpenMP default
  ConstantsArgs constants;
  VerifyArgs verify;
  CltArgs clt;
  MomentsArgs moments;
  SweepArgs sweep;
  SampleArgs sample;
  DiltMomentArgs dilt;
};

std::unique_ptr<CLI::App> build_app(RunConfig& cfg);

/// Parses and executes; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fbmlt::cli
