#pragma once

#include <span>
#include <vector>

#include "pbigraph/analytic.hpp"
#include "pbigraph/grid.hpp"
#include "pbigraph/solver.hpp"

namespace pbg {

/// Flux-form discretization of (sigma / (2 rho)) div(rho^2 grad u) on a
/// cell-centered grid. Face densities are arithmetic means of the adjacent
/// cells and boundary faces carry zero flux (homogeneous Neumann).
class WeightedFDOperator {
 public:
  WeightedFDOperator(const GridSpec& grid, const Density& rho, double sigma);
  /// Cell-center densities supplied directly (must be positive).
  WeightedFDOperator(const GridSpec& grid, std::vector<double> rho_centers, double sigma);

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& rho() const { return rho_; }
  double sigma() const { return sigma_; }
  /// rho_i h^d, the weights of the discrete inner product <u, v>_rho.
  const std::vector<double>& weights() const { return weights_; }

  void apply(std::span<const double> u, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> u) const;

  /// The operator as a self-adjoint map in <., .>_rho.
  LinearOperator linear_operator() const;

 private:
  GridSpec grid_;
  std::vector<double> rho_;
  std::vector<double> weights_;
  // rho^2 on the upper face of each cell along each axis (0 on boundary faces).
  std::vector<std::vector<double>> face_;
  double sigma_;
};

GridFunction weighted_laplacian_fd(const GridFunction& u, const WeightedFDOperator& op);

struct ContinuumSolve {
  GridFunction u;
  SolveReport report;
};

/// Minimizes (1/p) <|Lap_rho u|^p, 1>_rho + (lambda/2) <|u - f|^2, 1>_rho.
ContinuumSolve continuum_p_biharmonic_solve(const GridFunction& f, const WeightedFDOperator& op,
                                            const SolveConfig& cfg);

struct ManufacturedProblem {
  AnalyticFunction u_star;
  GridFunction f;
  double p;
  double lambda;
  /// f = factor * u_star exactly (uniform density, cosine u_star, p = 2).
  bool closed_form = false;
  double factor = 1.0;

  /// Forcing at an arbitrary point: closed form when available, otherwise
  /// multilinear interpolation of the grid forcing.
  double forcing_at(std::span<const double> x) const;
};

/// f = u* + (1/lambda) Lap_rho(|Lap_rho u*|^{p-2} Lap_rho u*). Closed form when
/// rho is uniform, u* is a cosine product and p = 2; otherwise the operator is
/// applied on a 4x finer grid and restricted by averaging the 2^d fine cells
/// nearest each coarse center.
ManufacturedProblem manufactured_forcing(const AnalyticFunction& u_star, double p, double lambda,
                                         const GridSpec& grid, const Density& rho, double sigma);

/// Multilinear interpolation between cell centers, clamped at the boundary.
double interpolate(const GridFunction& g, std::span<const double> x);

}  // namespace pbg
