#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pbigraph/analytic.hpp"
#include "pbigraph/geometry.hpp"
#include "pbigraph/kernels.hpp"
#include "pbigraph/nonlocal.hpp"
#include "pbigraph/solver.hpp"

namespace pbg::exp {

enum class Experiment { identities, consistency, graph_consistency, convergence, denoise, poincare };

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

/// eps_n from an explicit list (indexed like n_list) or c (ln n / n)^a.
struct EpsilonRule {
  enum class Kind { explicit_list, power };
  Kind kind = Kind::power;
  std::vector<double> values;
  double c = 1.5;
  double a = 0.2;

  double operator()(long long n, std::size_t index) const;
};

struct DensitySpec {
  std::string kind = "uniform";
  double amplitude = 0.5;
  int wavenumber = 1;
  int axis = 0;

  Density make(const BoxDomain& domain) const;
};

struct IdentityOptions {
  int instances = 20;
  int n_min = 200;
  int n_max = 500;
  double epsilon = 0.2;
  std::uint64_t base_seed = 1000;
  /// Test-mode negative control: perturb one graph weight asymmetrically.
  bool corrupt_weights = false;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::identities;
  BoxDomain domain = BoxDomain::unit(2);
  DensitySpec density;
  Kernel kernel = Kernel::indicator();
  double p = 2.0;
  double lambda = 1.0;
  std::vector<long long> n_list;
  EpsilonRule epsilon_rule;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<int> grid_shape{128, 128};
  std::string output_dir = "out";
  SolveConfig solver;

  IdentityOptions identities;
  /// consistency / poincare sweeps
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  /// Negative means "choose automatically" (see the runners).
  double interior_margin = -1.0;
  std::string preset = "cosine";
  std::vector<std::string> presets{"sine", "affine"};
  bool negative_control = true;
  double noise = 0.1;
  std::vector<double> p_list{2.0, 3.0};
  /// Optional pilot band for poincare ratios: preset -> [lo, hi].
  std::vector<std::pair<std::string, std::pair<double, double>>> poincare_bands;
  unsigned threads = 1;

  /// Throws ErrorCode::config on inconsistent settings.
  void validate() const;
};

/// Parses TOML text; `experiment_override` replaces the file's experiment key.
ExperimentConfig parse_config(const std::string& toml_text, std::optional<Experiment> experiment_override = {});
ExperimentConfig load_config(const std::string& path, std::optional<Experiment> experiment_override = {});

// ---------------------------------------------------------------------------
// Structured results shared by the CLI and the acceptance suite.

struct IdentityResult {
  std::string name;
  double max_violation = 0.0;
  double tolerance = 0.0;
  int instances = 0;
  bool pass = true;
  /// Description of the worst instance (seed, n, eps, parameters).
  std::string worst_instance;
  std::uint64_t worst_seed = 0;
  long long worst_n = 0;
};

/// Self-adjointness, hypergraph adjointness (eps-built and general arcs), the
/// hypergraph p-Laplacian identity for p in {1.5, 2, 3, 4}, and gradient checks
/// for graph and continuum energies.
std::vector<IdentityResult> run_identity_suite(const IdentityOptions& opt, const Kernel& kernel);

struct ConsistencyRow {
  double epsilon;
  double h;
  ConsistencyError error;
};
std::vector<ConsistencyRow> consistency_sweep(const BoxDomain& domain, const Density& rho, const Kernel& kernel,
                                              const AnalyticFunction& phi, const std::vector<int>& grid_shape,
                                              const std::vector<double>& epsilons, double interior_margin);

struct GraphConsistencyRow {
  std::string rule;  // "rule" or "control"
  long long n;
  std::uint64_t seed;
  double epsilon;
  ConsistencyError error;
};
std::vector<GraphConsistencyRow> graph_consistency_sweep(const ExperimentConfig& cfg, bool include_control,
                                                         bool interior_only, double interior_margin);

struct ConvergenceRow {
  long long n;
  std::uint64_t seed;
  double epsilon;
  double lp_error;
  double tlp_upper;
  double sup_displacement;
  double delta_n;
  double max_abs_u;
  double apriori_lhs;
  double apriori_rhs;
  int iterations;
  SolveStatus status;
};
std::vector<ConvergenceRow> convergence_sweep(const ExperimentConfig& cfg);

struct DenoiseRow {
  double p;
  long long n;
  std::uint64_t seed;
  double noise;
  double lambda;
  double noisy_error;
  double denoised_error;
  int iterations;
  SolveStatus status;
};
std::vector<DenoiseRow> denoise_sweep(const ExperimentConfig& cfg);

struct PoincareRow {
  std::string preset;
  double epsilon;
  double ratio;
};
std::vector<PoincareRow> poincare_sweep(const ExperimentConfig& cfg);

double median(std::vector<double> v);

/// Named pass/fail outcome written to report.json.
struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 1 check failure
  std::vector<Check> checks;
  std::string report_path;
};

/// Runs the configured experiment, writes CSV/SVG/report.json into
/// cfg.output_dir and evaluates the experiment's checks.
RunOutcome run_experiment(const ExperimentConfig& cfg);

/// Minimal log-log line chart.
struct Series {
  std::string label;
  std::vector<double> x, y;
};
std::string svg_loglog(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                       const std::vector<Series>& series);

}  // namespace pbg::exp
