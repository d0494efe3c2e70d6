#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "helpers.hpp"
#include "pbigraph/error.hpp"
#include "pbigraph/experiments.hpp"

using namespace pbg;
using namespace pbg::exp;

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("pbg_exp_" + name);
  fs::remove_all(p);
  return p;
}

std::string first_line(const fs::path& p) {
  std::ifstream is(p);
  std::string s;
  std::getline(is, s);
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PBG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path write_config(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / ("pbg_cfg_" + name + ".toml");
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Config, ParsesFullConvergenceConfig) {
  const auto cfg = parse_config(R"(
experiment = "convergence"
domain = { lo = [0.0, 0.0], hi = [2.0, 1.0] }
density = { kind = "cosine", amplitude = 0.3 }
kernel = { name = "truncated-linear", radius = 2.0 }
p = 3.0
lambda = 0.5
n_list = [100, 200]
epsilon_rule = { kind = "power", c = 1.2, a = 0.2 }
seeds = [4, 5]
grid_shape = [32, 16]
threads = 2

[solver]
method = "gradient-bb"
tol = 1e-7
max_iter = 500
)");
  EXPECT_EQ(cfg.experiment, Experiment::convergence);
  EXPECT_DOUBLE_EQ(cfg.domain.hi(0), 2.0);
  EXPECT_EQ(cfg.density.kind, "cosine");
  EXPECT_EQ(cfg.kernel, Kernel::truncated_linear(2.0));
  EXPECT_EQ(cfg.n_list, (std::vector<long long>{100, 200}));
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{4, 5}));
  EXPECT_EQ(cfg.solver.method, SolveMethod::gradient_bb);
  EXPECT_EQ(cfg.solver.max_iter, 500);
  EXPECT_EQ(cfg.threads, 2u);
  EXPECT_NEAR(cfg.epsilon_rule(100, 0), 1.2 * std::pow(std::log(100.0) / 100.0, 0.2), 1e-15);
  EXPECT_EQ(cfg.output_dir, "out/convergence");
}

TEST(Config, ExplicitEpsilonList) {
  const auto cfg = parse_config("experiment = \"graph-consistency\"\nn_list = [10, 20]\nepsilon_rule = [0.3, 0.2]\n");
  EXPECT_EQ(cfg.epsilon_rule.kind, EpsilonRule::Kind::explicit_list);
  EXPECT_DOUBLE_EQ(cfg.epsilon_rule(20, 1), 0.2);
}

TEST(Config, RejectsBadInput) {
  EXPECT_CODE(parse_config("experiment = \"nope\"\n"), ErrorCode::config);
  EXPECT_CODE(parse_config("experiment = \"identities\"\nbogus_key = 1\n"), ErrorCode::config);
  EXPECT_CODE(parse_config("experiment = \"identities\"\np = \"two\"\n"), ErrorCode::config);
  EXPECT_CODE(parse_config("experiment = [\n"), ErrorCode::config);
  // Exponent must leave eps_n >> sqrt(delta_n): a < 1/4 in two dimensions.
  EXPECT_CODE(parse_config("experiment = \"convergence\"\nn_list = [100]\nepsilon_rule = { kind = \"power\", c = 1.5, a = 0.3 }\n")
                  .validate(),
              ErrorCode::config);
  EXPECT_CODE(parse_config("experiment = \"convergence\"\nn_list = [100]\nlambda = 0.0\n").validate(), ErrorCode::config);
  EXPECT_CODE(load_config("/nonexistent/config.toml"), ErrorCode::config);
}

TEST(Config, ShippedConfigsAreValid) {
  for (const char* name : {"identities", "consistency", "graph_consistency", "convergence", "denoise", "poincare"}) {
    const auto cfg = load_config(std::string(PBG_SOURCE_DIR) + "/configs/" + name + ".toml");
    EXPECT_NO_THROW(cfg.validate()) << name;
  }
}

TEST(IdentitySuite, MatchesGolden) {
  const auto golden = nlohmann::json::parse(slurp(std::string(PBG_SOURCE_DIR) + "/tests/golden/identities_report.json"));
  const auto out = scratch("identities");
  auto cfg = load_config(std::string(PBG_SOURCE_DIR) + "/configs/identities.toml");
  cfg.output_dir = out.string();
  const auto outcome = run_experiment(cfg);
  EXPECT_EQ(outcome.exit_code, 0);
  const auto report = nlohmann::json::parse(slurp(outcome.report_path));

  std::vector<std::string> keys;
  for (auto it = report.begin(); it != report.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(nlohmann::json(keys), golden["top_level_keys"]);

  const auto& ids = report["identities"];
  ASSERT_EQ(ids.size(), golden["identities"].size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& g = golden["identities"][i];
    for (const char* k : {"name", "instances", "tolerance", "pass", "worst_instance"}) EXPECT_EQ(ids[i][k], g[k]) << k;
    EXPECT_LE(ids[i]["max_violation"].get<double>(), ids[i]["tolerance"].get<double>());
  }
}

TEST(IdentitySuite, CorruptedWeightsFail) {
  IdentityOptions opt;
  opt.instances = 3;
  opt.corrupt_weights = true;
  const auto res = run_identity_suite(opt, Kernel::indicator(1.0));
  ASSERT_FALSE(res.empty());
  EXPECT_EQ(res[0].name, "graph_self_adjointness");
  EXPECT_FALSE(res[0].pass);
  EXPECT_GT(res[0].max_violation, 1e-8);
}

TEST(Sweeps, CsvSchemasAndChecks) {
  struct Case {
    std::string config, csv, header;
  };
  const std::vector<Case> cases = {
      {"experiment = \"convergence\"\nn_list = [300, 600]\nseeds = [1]\ngrid_shape = [24, 24]\n", "convergence.csv",
       "n,epsilon,lp_error,tlp_upper,sup_displacement,delta_n,seed,max_abs_u,apriori_lhs,apriori_rhs,iterations,status"},
      {"experiment = \"denoise\"\nn_list = [400]\nseeds = [1, 2]\nlambda = 1000.0\n", "denoise.csv",
       "p,n,seed,noise,lambda,noisy_error,denoised_error,iterations,status"},
      {"experiment = \"graph-consistency\"\nn_list = [500, 1000]\nseeds = [1]\n", "graph_consistency.csv",
       "rule,n,seed,epsilon,sup_interior,interior_count"},
      {"experiment = \"consistency\"\ngrid_shape = [64, 64]\n[consistency]\nepsilons = [0.2, 0.1]\n", "consistency.csv",
       "epsilon,h,sup_interior,sup_global,interior_count,count"},
      {"experiment = \"poincare\"\ngrid_shape = [64, 64]\n[poincare]\nepsilons = [0.2, 0.1]\n", "poincare.csv",
       "preset,epsilon,ratio"},
  };
  for (const auto& c : cases) {
    const auto out = scratch(c.csv);
    auto cfg = parse_config(c.config);
    cfg.output_dir = out.string();
    cfg.validate();
    const auto outcome = run_experiment(cfg);
    EXPECT_FALSE(outcome.checks.empty()) << c.csv;
    EXPECT_EQ(first_line(out / c.csv), c.header);
    const auto report = nlohmann::json::parse(slurp(outcome.report_path));
    EXPECT_EQ(report["csv_schema"][c.csv]["version"], 1) << c.csv;
    EXPECT_EQ(report["pass"].get<bool>(), outcome.exit_code == 0);
  }
}

TEST(Sweeps, ReproducibleAcrossThreadCounts) {
  std::string csv[2];
  for (unsigned t : {1u, 2u}) {
    const auto out = scratch("repro" + std::to_string(t));
    auto cfg = parse_config("experiment = \"convergence\"\nn_list = [300, 500]\nseeds = [1, 2]\ngrid_shape = [24, 24]\n");
    cfg.output_dir = out.string();
    cfg.threads = t;
    run_experiment(cfg);
    csv[t - 1] = slurp(out / "convergence.csv");
  }
  EXPECT_EQ(csv[0], csv[1]);
}

TEST(Svg, LogLogChart) {
  const auto s = svg_loglog("err <vs> n", "n", "error", {{"median", {1e3, 1e4}, {0.5, 0.1}}, {"bad", {0, 1}, {1, -1}}});
  EXPECT_EQ(s.rfind("<svg", 0), 0u);
  EXPECT_NE(s.find("&lt;vs&gt;"), std::string::npos);
  EXPECT_NE(s.find("<polyline"), std::string::npos);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
}

TEST(Median, OddAndEven) {
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
}

TEST(Cli, ExitCodes) {
  const std::string cfgdir = std::string(PBG_SOURCE_DIR) + "/configs/";
  const auto out = scratch("cli");
  EXPECT_EQ(run_cli("identities --config " + cfgdir + "identities.toml --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "report.json"));

  const auto corrupt = write_config("corrupt", "experiment = \"identities\"\n[identities]\ninstances = 2\ncorrupt_weights = true\n");
  EXPECT_EQ(run_cli("identities --config " + corrupt.string() + " --out " + scratch("cli_bad").string()), 1);

  const auto bad_exp = write_config("badexp", "experiment = \"convergence\"\nn_list = [100]\nepsilon_rule = { kind = \"power\", a = 0.3 }\n");
  EXPECT_EQ(run_cli("convergence --config " + bad_exp.string()), 2);
  const auto unknown = write_config("unknown", "experiment = \"identities\"\nfoo = 1\n");
  EXPECT_EQ(run_cli("identities --config " + unknown.string()), 2);
  EXPECT_EQ(run_cli("identities --config /nonexistent.toml"), 2);
  EXPECT_EQ(run_cli("teleport --config " + cfgdir + "identities.toml"), 2);
  EXPECT_EQ(run_cli("identities"), 2);
  EXPECT_EQ(run_cli("identities --config " + cfgdir + "identities.toml --threads 0"), 2);
  EXPECT_EQ(run_cli("--help"), 0);
}

TEST(Cli, SeedOverride) {
  const auto out = scratch("cli_seeds");
  const auto cfg = write_config("seeds", "experiment = \"graph-consistency\"\nn_list = [300]\nseeds = [1, 2, 3]\n");
  run_cli("graph-consistency --config " + cfg.string() + " --out " + out.string() + " --seeds 7,9");
  const auto report = nlohmann::json::parse(slurp(out / "report.json"));
  EXPECT_EQ(report["seeds"], nlohmann::json({7, 9}));
}
