#include <gtest/gtest.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"
#include "fbmlt/io.hpp"
#include "fbmlt/moments.hpp"

namespace fbmlt::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
  return f;
}

fs::path fresh_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("fbmlt_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST(CliHelp, EveryOptionShowsItsDefault) {
  RunConfig cfg;
  auto app = build_app(cfg);
  for (const auto* sub : app->get_subcommands({})) {
    const std::string help = sub->help();
    for (const auto* opt : sub->get_options()) {
      if (opt->get_name() == "--help" || opt->get_name() == "-h,--help" || opt->get_type_size() == 0) continue;
      const std::string name = opt->get_name();
      EXPECT_NE(help.find(name), std::string::npos) << sub->get_name() << " " << name;
      // Options without an empty default print it in brackets.
      if (!opt->get_default_str().empty()) {
        EXPECT_NE(help.find("[" + opt->get_default_str()), std::string::npos) << sub->get_name() << " " << name;
      }
    }
  }
}

TEST(CliHelp, DefaultsMatchRunConfig) {
  RunConfig cfg;
  auto app = build_app(cfg);
  const RunConfig ref;
  auto* clt = app->get_subcommand("clt");
  EXPECT_EQ(clt->get_option("--N")->get_default_str(), std::to_string(ref.clt.count));
  EXPECT_EQ(clt->get_option("--n")->get_default_str(), std::to_string(ref.clt.n));
  EXPECT_EQ(clt->get_option("--seed")->get_default_str(), std::to_string(ref.clt.seed));
  auto* dm = app->get_subcommand("dilt-moment");
  EXPECT_DOUBLE_EQ(std::stod(dm->get_option("--rel-tol")->get_default_str()), DiltMomentOptions{}.rel_tol);
  EXPECT_EQ(dm->get_option("--budget")->get_default_str(), std::to_string(DiltMomentOptions{}.eval_budget));
  const std::vector<std::string> subs{"constants", "verify-lemmas", "clt", "moments", "sweep", "sample", "dilt-moment"};
  for (const auto& s : subs) EXPECT_NE(app->get_subcommand(s), nullptr);
}

TEST(Cli, ConstantsTableAndOutOfRegime) {
  const auto dir = fresh_dir("constants");
  auto r = run_cli({"--out-dir", dir.string(), "constants", "--d", "2", "--H", "0.75,0.4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto csv = read_file(dir / "constants.csv");
  EXPECT_NE(csv.find("out-of-regime"), std::string::npos);
  std::istringstream is(csv);
  std::string header, line;
  std::getline(is, header);
  EXPECT_EQ(header, "d,H,t,sigma_sq_closed,sigma_sq_quadrature,rel_gap,status");
  std::getline(is, line);
  EXPECT_LT(std::stod(fields(line).at(5)), 1e-3);
  EXPECT_TRUE(fs::exists(dir / "constants_manifest.json"));
}

TEST(Cli, ConstantsTimeScaling) {
  const auto d1 = fresh_dir("t1"), d2 = fresh_dir("t2");
  ASSERT_EQ(run_cli({"--out-dir", d1.string(), "constants", "--d", "3", "--H", "0.6"}).code, 0);
  ASSERT_EQ(run_cli({"--out-dir", d2.string(), "constants", "--d", "3", "--H", "0.6", "--t", "2"}).code, 0);
  auto closed = [](const fs::path& p) {
    std::istringstream is(read_file(p / "constants.csv"));
    std::string line;
    std::getline(is, line);
    std::getline(is, line);
    return std::stod(fields(line).at(3));
  };
  EXPECT_NEAR(closed(d2) / closed(d1), std::pow(2.0, 1.2), 1e-12);
}

TEST(Cli, VerifyLemmas) {
  auto a = run_cli({"--out-dir", fresh_dir("verify").string(), "verify-lemmas", "--seed", "7"});
  auto b = run_cli({"--out-dir", fresh_dir("verify").string(), "verify-lemmas", "--seed", "7"});
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  auto c = run_cli({"verify-lemmas", "--include-n1-gamma"});
  EXPECT_EQ(c.code, kExitOk);
  EXPECT_NE(c.out.find("EXPECTED-FAIL"), std::string::npos);
}

TEST(Cli, CltArtifactsReproducible) {
  const auto d1 = fresh_dir("clt1"), d2 = fresh_dir("clt2");
  const std::vector<std::string> flags{"clt", "--d", "2", "--H", "0.75", "--eps", "0.05", "--n", "64", "--N", "100",
                                       "--seed", "42"};
  auto a1 = flags, a2 = flags;
  a1.insert(a1.begin(), {"--out-dir", d1.string()});
  a2.insert(a2.begin(), {"--out-dir", d2.string()});
  ASSERT_EQ(run_cli(a1).code, kExitOk);
  ASSERT_EQ(run_cli(a2).code, kExitOk);
  for (const char* f : {"clt.csv", "clt_samples.csv", "clt_verdict.json"}) {
    EXPECT_EQ(sha256_hex(read_file(d1 / f)), sha256_hex(read_file(d2 / f))) << f;
  }
  const auto m = nlohmann::json::parse(read_file(d1 / "clt_manifest.json"));
  EXPECT_EQ(m["command"], "clt");
  ASSERT_EQ(m["artifacts"].size(), 3u);
  for (const auto& a : m["artifacts"]) {
    EXPECT_EQ(a["sha256"], sha256_hex(read_file(d1 / a["file"].get<std::string>())));
  }
}

TEST(Cli, CltCheckExitCode) {
  auto r = run_cli({"--out-dir", fresh_dir("cltcheck").string(), "clt", "--n", "64", "--N", "50", "--eps", "0.05",
                    "--variance-tolerance", "0", "--check"});
  EXPECT_EQ(r.code, kExitCheckFailed);
}

TEST(Cli, SampleDump) {
  const auto dir = fresh_dir("sample");
  fs::create_directories(dir);
  const auto path = dir / "path.csv";
  auto r = run_cli({"--out-dir", dir.string(), "sample", "--H", "0.75", "--n", "64", "--seed", "1", "--dump",
                    path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream is(read_file(path));
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "time,comp_1");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 64);
}

TEST(Cli, SampleRefinementTable) {
  const auto dir = fresh_dir("refine");
  auto r = run_cli({"--out-dir", dir.string(), "sample", "--n", "16", "--refine-levels", "3", "--refine-paths", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto t = read_file(dir / "refinement.csv");
  EXPECT_EQ(t.substr(0, t.find('\n')), "n,mean_estimate,mean_abs_change");
}

TEST(Cli, ValidationErrors) {
  EXPECT_EQ(run_cli({"clt", "--sampler", "bogus"}).code, kExitValidation);
  EXPECT_EQ(run_cli({"nonsense"}).code, kExitValidation);
  EXPECT_EQ(run_cli({}).code, kExitValidation);
  auto r = run_cli({"--out-dir", fresh_dir("oor").string(), "dilt-moment", "--H", "0.6", "--k", "1,0"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_NE(r.err.find("allow-out-of-regime"), std::string::npos);
  EXPECT_EQ(run_cli({"--out-dir", fresh_dir("clt_oor").string(), "clt", "--H", "0.4"}).code, kExitValidation);
  EXPECT_EQ(run_cli({"--out-dir", fresh_dir("moments_oor").string(), "moments", "--H", "0.7", "--k", "1,0,0", "--N",
                     "10"}).code,
            kExitValidation);
}

TEST(Cli, NumericalFailureExitCode) {
  auto r = run_cli({"--out-dir", fresh_dir("budget").string(), "constants", "--d", "2", "--H", "0.75", "--eps", "1e-3",
                    "--budget", "2000"});
  EXPECT_EQ(r.code, kExitNumerical);
  EXPECT_NE(r.err.find("did not converge"), std::string::npos);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto dir = fresh_dir("config");
  fs::create_directories(dir);
  const auto cfg = dir / "run.toml";
  std::ofstream(cfg) << "out-dir = \"" << (dir / "out").string() << "\"\n[sample]\nn = 8\nH = 0.3\n";
  auto r = run_cli({"--config", cfg.string(), "sample", "--n", "16"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream is(read_file(dir / "out" / "path.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 16);
  const auto m = nlohmann::json::parse(read_file(dir / "out" / "sample_manifest.json"));
  EXPECT_NE(m["config"].get<std::string>().find("H=0.3"), std::string::npos);
}

TEST(Cli, EnvOutputDirectory) {
  const auto dir = fresh_dir("env");
  setenv("FBMLT_OUT_DIR", dir.string().c_str(), 1);
  auto r = run_cli({"sample", "--n", "4"});
  unsetenv("FBMLT_OUT_DIR");
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_TRUE(fs::exists(dir / "path.csv"));
}

TEST(Cli, DiltMomentAndSweepArtifacts) {
  const auto dir = fresh_dir("dm");
  auto r = run_cli({"--out-dir", dir.string(), "dilt-moment", "--H", "0.5", "--k", "0", "--eps", "1", "--rel-tol",
                    "1e-3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto csv = read_file(dir / "dilt_moment.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "H,k,epsilon,value,abs_error,evals,converged");
  r = run_cli({"--out-dir", dir.string(), "sweep", "--k", "0", "--H", "0.5", "--eps", "0.2,0.1", "--N", "20", "--n",
               "16"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "sweep.csv"));
  EXPECT_TRUE(fs::exists(dir / "sweep_verdict.json"));
  r = run_cli({"--out-dir", dir.string(), "moments", "--H", "0.5", "--k", "0", "--N", "40", "--n", "16",
               "--resamples", "20"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "moments.csv"));
  EXPECT_TRUE(fs::exists(dir / "exp_integrability.csv"));
}

}  // namespace
}  // namespace fbmlt::cli
