#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pbigraph/graph_ops.hpp"
#include "pbigraph/hypergraph.hpp"

namespace pbg {

/// Linear map L: R^cols -> R^rows with weighted inner products on both sides.
/// `adjoint` is the adjoint with respect to those weights; leave it empty when
/// L is self-adjoint (then rows == cols and both weight vectors agree).
struct LinearOperator {
  using Apply = std::function<void(std::span<const double>, std::span<double>)>;

  std::size_t rows = 0;
  std::size_t cols = 0;
  Apply apply;
  Apply adjoint;
  std::vector<double> domain_weights;  // empty means unit weights
  std::vector<double> range_weights;

  void apply_adjoint(std::span<const double> v, std::span<double> out) const;
};

/// Symmetric operator with a single weight vector.
LinearOperator self_adjoint_operator(std::size_t n, LinearOperator::Apply apply, std::vector<double> weights);

enum class SolveMethod { automatic, gradient_bb, cg_p2 };
enum class SolveStatus { converged, max_iter, stalled };

std::string to_string(SolveMethod m);
std::string to_string(SolveStatus s);
SolveMethod parse_solve_method(const std::string& name);

struct SolveConfig {
  double p = 2.0;
  double lambda = 1.0;
  double tol = 1e-8;
  int max_iter = 20000;
  SolveMethod method = SolveMethod::automatic;
  /// Initial smoothing for p < 2; ignored for p >= 2.
  double tau = 1e-3;
  int continuation_steps = 6;
  /// Skip the self-adjointness probe (only for operators checked elsewhere).
  bool probe = true;

  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  /// Energy after each accepted step of the final smoothing stage, starting
  /// with the energy of that stage's initial iterate.
  std::vector<double> energy_trace;
  double final_grad_norm = 0.0;
  SolveStatus status = SolveStatus::max_iter;
  SolveMethod method = SolveMethod::automatic;
  double final_tau = 0.0;
  /// Iterations spent in each smoothing stage.
  std::vector<int> stage_iterations;

  std::string to_json(bool include_trace = true) const;
};

struct SolveResult {
  std::vector<double> u;
  SolveReport report;
};

/// Smoothed power phi_tau(s) = ((s^2 + tau^2)^{p/2} - tau^p) / p; |s|^p / p at tau = 0.
double smoothed_power(double s, double p, double tau);
/// phi_tau'(s) = s (s^2 + tau^2)^{p/2 - 1}.
double smoothed_power_derivative(double s, double p, double tau);

/// E(u) = (1/p) <phi_tau(Lu), 1>_range + (lambda/2) <(u-f)^2, 1>_domain with
/// phi scaled so that tau = 0 recovers |s|^p / p.
double quadratic_p_energy(const LinearOperator& L, std::span<const double> u, std::span<const double> f, double p,
                          double lambda, double tau = 0.0);

/// Gradient of quadratic_p_energy in the domain inner product:
/// L^dagger phi_tau'(Lu) + lambda (u - f).
std::vector<double> quadratic_p_gradient(const LinearOperator& L, std::span<const double> u,
                                         std::span<const double> f, double p, double lambda, double tau = 0.0);

/// Checks <Lu, v>_range = <u, L^dagger v>_domain on random probes; throws
/// ErrorCode::self_adjointness beyond the relative tolerance.
double probe_adjointness(const LinearOperator& L, double tol = 1e-10, int probes = 3, unsigned seed = 12345);

/// Barzilai-Borwein gradient descent with monotone Armijo backtracking, started
/// at u = f. For p < 2 the power is smoothed and tau is halved
/// `continuation_steps` times. method = automatic picks CG when p == 2.
SolveResult minimize(const LinearOperator& L, std::span<const double> f, const SolveConfig& cfg);

/// Conjugate gradients on (L^dagger L + lambda I) u = lambda f in the domain
/// inner product, stopping at relative residual <= tol.
SolveResult cg_solve_p2(const LinearOperator& L, std::span<const double> f, double lambda, double tol = 1e-10,
                        int max_iter = 10000);

/// L = Lap_G with weights 1/n on both sides, so the energy is E_n.
LinearOperator graph_operator(const WeightedGraph& g);
SolveResult solve_graph_p_biharmonic(const WeightedGraph& g, std::span<const double> f, const SolveConfig& cfg);

/// L = c grad_H with c = 1/(n eps^2), adjoint c grad*_H, weights 1/n.
LinearOperator hypergraph_operator(const OrientedHypergraph& h, double scale);
SolveResult solve_hypergraph_p_laplacian(const OrientedHypergraph& h, double eps, std::span<const double> f,
                                         const SolveConfig& cfg);

}  // namespace pbg
