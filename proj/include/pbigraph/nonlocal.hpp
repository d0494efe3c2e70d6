#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pbigraph/analytic.hpp"
#include "pbigraph/geometry.hpp"
#include "pbigraph/graph_ops.hpp"
#include "pbigraph/grid.hpp"
#include "pbigraph/kernels.hpp"

namespace pbg {

struct NonlocalConfig {
  Kernel kernel;
  double epsilon;
  Density density;
  SigmaEta sigma;

  /// Computes sigma_eta and checks that R eps < min side / 2.
  static NonlocalConfig make(const Kernel& kernel, double epsilon, const Density& density);
};

/// Midpoint-rule discretization of
///   (1/eps^2) int_Omega eta_eps(|x-y|) (u(y) - u(x)) rho(y) dy
/// on the cell centers of a grid, summed directly over the cells inside the
/// kernel ball and restricted to Omega.
class NonlocalOperator {
 public:
  /// Throws ErrorCode::resolution unless R eps spans at least 4 cells per axis.
  NonlocalOperator(const GridSpec& grid, const NonlocalConfig& cfg);

  const GridSpec& grid() const { return grid_; }
  const NonlocalConfig& config() const { return cfg_; }
  const std::vector<double>& rho() const { return rho_; }

  void apply(std::span<const double> u, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> u) const;

  /// m(x) = sum_y eta_eps(|x-y|) rho(y) h^d, the local kernel mass.
  const std::vector<double>& mass() const { return mass_; }

  /// eps^{-p} sum_x sum_y eta_eps(|x-y|) |u(y)-u(x)|^p h^{2d}  (no density).
  double nonlocal_p_energy(std::span<const double> u, double p) const;

 private:
  struct Line {
    std::vector<int> prefix;  // offsets along axes 0..d-2
    int first = 0;            // offset of weights[0] along the last axis
    std::vector<double> weights;
  };

  // out[x] = sum_y w(x-y) * term(x, y) over in-domain y, one stencil line at a time.
  template <class Term>
  void sweep(std::span<double> out, Term term) const;

  GridSpec grid_;
  NonlocalConfig cfg_;
  std::vector<Line> lines_;
  std::vector<double> rho_;
  std::vector<double> mass_;
};

GridFunction nonlocal_laplacian(const GridFunction& u, const NonlocalConfig& cfg);

/// r = -Lap^eta_{rho,eps} u - h.
GridFunction nonlocal_poisson_residual(const GridFunction& u, const GridFunction& h, const NonlocalConfig& cfg);

struct RichardsonResult {
  std::vector<double> u;
  /// sqrt(sum rho r^2 / m h^d) before each step and after the last one.
  std::vector<double> residual_norms;
};

/// Damped fixed-point iteration u <- u - omega eps^2 r / m for -Lap u = h,
/// started from u = 0. The recorded norm is nonincreasing for omega in (0, 1/2].
RichardsonResult nonlocal_richardson(const NonlocalOperator& op, std::span<const double> h, int iterations,
                                     double omega = 0.5);

/// int |u - mean(u)|^p dx divided by eps^{-p} int int eta_eps |u(y)-u(x)|^p dy dx.
/// Throws ErrorCode::degenerate_input when the denominator vanishes.
double nonlocal_poincare_ratio(const GridFunction& u, const NonlocalConfig& cfg, double p);

struct ConsistencyError {
  double sup_interior = 0.0;
  double sup_global = 0.0;
  std::size_t interior_count = 0;
  std::size_t count = 0;
};

/// sup |Lap^eta_{rho,eps} phi - Lap_rho phi| over grid centers, split by
/// distance to the boundary. phi must be Neumann-certified.
ConsistencyError consistency_error(const AnalyticFunction& phi, const NonlocalConfig& cfg, const GridSpec& grid,
                                   double interior_margin);

/// sup |Lap_G phi(x_i) - Lap_rho phi(x_i)| over the graph vertices.
ConsistencyError graph_consistency_error(const WeightedGraph& g, const AnalyticFunction& phi, const Density& rho,
                                         double sigma, double interior_margin);

/// Same quantity without storing the graph; neighbor sums are formed on the
/// fly. With interior_only, points closer than the margin to the boundary are
/// skipped and sup_global is left at zero.
ConsistencyError graph_consistency_error(const PointCloud& cloud, const Kernel& kernel, double eps,
                                         const AnalyticFunction& phi, const Density& rho, double sigma,
                                         double interior_margin, bool interior_only = false);

}  // namespace pbg
