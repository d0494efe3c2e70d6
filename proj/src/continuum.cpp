#include "pbigraph/continuum.hpp"

#include <algorithm>
#include <cmath>

#include "pbigraph/error.hpp"
#include "pbigraph/graph_ops.hpp"
#include "pbigraph/parallel.hpp"

namespace pbg {

WeightedFDOperator::WeightedFDOperator(const GridSpec& grid, const Density& rho, double sigma)
    : WeightedFDOperator(grid, density_on_grid(grid, rho), sigma) {
  require_arg(grid.domain() == rho.domain(), "WeightedFDOperator: grid and density live on different domains");
}

WeightedFDOperator::WeightedFDOperator(const GridSpec& grid, std::vector<double> rho_centers, double sigma)
    : grid_(grid), rho_(std::move(rho_centers)), sigma_(sigma) {
  require_length(rho_.size(), grid_.size(), "WeightedFDOperator density");
  require_arg(sigma_ > 0.0, "WeightedFDOperator: sigma must be > 0");
  for (double r : rho_) require(r > 0.0 && std::isfinite(r), ErrorCode::invalid_density, "density must be positive");
  const int d = grid_.dim();
  weights_.resize(rho_.size());
  for (std::size_t i = 0; i < rho_.size(); ++i) weights_[i] = rho_[i] * grid_.cell_volume();
  face_.assign(d, std::vector<double>(grid_.size(), 0.0));
  std::vector<int> idx(d);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    grid_.unravel(i, idx);
    for (int k = 0; k < d; ++k) {
      if (idx[k] + 1 < grid_.shape(k)) {
        const double r = 0.5 * (rho_[i] + rho_[i + grid_.stride(k)]);
        face_[k][i] = r * r;
      }
    }
  }
}

void WeightedFDOperator::apply(std::span<const double> u, std::span<double> out) const {
  require_length(u.size(), grid_.size(), "weighted_laplacian_fd input");
  require_length(out.size(), grid_.size(), "weighted_laplacian_fd output");
  const int d = grid_.dim();
  std::vector<double> inv_h2(d);
  for (int k = 0; k < d; ++k) inv_h2[k] = 1.0 / (grid_.spacing(k) * grid_.spacing(k));
  parallel_for(grid_.size(), [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(d);
    for (std::size_t i = b; i < e; ++i) {
      grid_.unravel(i, idx);
      double acc = 0.0;
      for (int k = 0; k < d; ++k) {
        const std::size_t s = grid_.stride(k);
        double flux = 0.0;
        if (idx[k] + 1 < grid_.shape(k)) flux += face_[k][i] * (u[i + s] - u[i]);
        if (idx[k] > 0) flux -= face_[k][i - s] * (u[i] - u[i - s]);
        acc += flux * inv_h2[k];
      }
      out[i] = sigma_ / (2.0 * rho_[i]) * acc;
    }
  });
}

std::vector<double> WeightedFDOperator::apply(std::span<const double> u) const {
  std::vector<double> out(u.size());
  apply(u, out);
  return out;
}

LinearOperator WeightedFDOperator::linear_operator() const {
  return self_adjoint_operator(
      grid_.size(), [this](std::span<const double> u, std::span<double> out) { apply(u, out); }, weights_);
}

GridFunction weighted_laplacian_fd(const GridFunction& u, const WeightedFDOperator& op) {
  require_arg(u.grid == op.grid(), "weighted_laplacian_fd: grid mismatch");
  return GridFunction(u.grid, op.apply(u.values));
}

ContinuumSolve continuum_p_biharmonic_solve(const GridFunction& f, const WeightedFDOperator& op,
                                            const SolveConfig& cfg) {
  require_arg(f.grid == op.grid(), "continuum solve: grid mismatch");
  require_arg(cfg.lambda > 0.0, "continuum solve: lambda must be > 0");
  auto res = minimize(op.linear_operator(), f.values, cfg);
  return {GridFunction(f.grid, std::move(res.u)), std::move(res.report)};
}

double interpolate(const GridFunction& g, std::span<const double> x) {
  const auto& grid = g.grid;
  const int d = grid.dim();
  std::vector<int> base(d), idx(d);
  std::vector<double> t(d);
  for (int k = 0; k < d; ++k) {
    double s = (x[k] - grid.domain().lo(k)) / grid.spacing(k) - 0.5;
    s = std::clamp(s, 0.0, static_cast<double>(grid.shape(k) - 1));
    base[k] = std::min(static_cast<int>(std::floor(s)), grid.shape(k) - 2);
    t[k] = s - base[k];
  }
  double v = 0.0;
  for (int corner = 0; corner < (1 << d); ++corner) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      const int bit = (corner >> k) & 1;
      idx[k] = base[k] + bit;
      w *= bit ? t[k] : 1.0 - t[k];
    }
    if (w != 0.0) v += w * g.values[grid.ravel(idx)];
  }
  return v;
}

double ManufacturedProblem::forcing_at(std::span<const double> x) const {
  if (closed_form) return factor * u_star(x);
  return interpolate(f, x);
}

ManufacturedProblem manufactured_forcing(const AnalyticFunction& u_star, double p, double lambda,
                                         const GridSpec& grid, const Density& rho, double sigma) {
  require_arg(lambda > 0.0, "manufactured_forcing: lambda must be > 0");
  require_arg(p > 1.0, "manufactured_forcing: p must be > 1");
  require_arg(u_star.neumann_certified(), "manufactured_forcing: u* must be Neumann-certified");
  ManufacturedProblem mp{u_star, GridFunction(grid), p, lambda};

  if (rho.is_constant() && p == 2.0 &&
      (u_star.kind() == AnalyticFunction::Kind::cosine_product || u_star.kind() == AnalyticFunction::Kind::constant)) {
    // Lap_rho u* = -mu u* with mu = sigma rho kappa / 2.
    const double kappa =
        u_star.kind() == AnalyticFunction::Kind::constant ? 0.0 : u_star.cosine_eigenvalue();
    const double mu = 0.5 * sigma * rho.max_value() * kappa;
    mp.closed_form = true;
    mp.factor = 1.0 + mu * mu / lambda;
    mp.f = u_star.on_grid(grid);
    for (double& v : mp.f.values) v *= mp.factor;
    return mp;
  }

  const int d = grid.dim();
  std::vector<int> fine_shape(d);
  for (int k = 0; k < d; ++k) fine_shape[k] = 4 * grid.shape(k);
  const GridSpec fine(grid.domain(), fine_shape);
  const WeightedFDOperator op(fine, rho, sigma);
  const auto us = u_star.on_grid(fine);
  auto g = op.apply(us.values);
  for (double& v : g) v = signed_power(v, p);
  const auto q = op.apply(g);
  std::vector<double> ff(fine.size());
  for (std::size_t i = 0; i < ff.size(); ++i) ff[i] = us.values[i] + q[i] / lambda;

  std::vector<int> idx(d), fidx(d);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.unravel(i, idx);
    double acc = 0.0;
    for (int corner = 0; corner < (1 << d); ++corner) {
      for (int k = 0; k < d; ++k) fidx[k] = 4 * idx[k] + 1 + ((corner >> k) & 1);
      acc += ff[fine.ravel(fidx)];
    }
    mp.f.values[i] = acc / (1 << d);
  }
  return mp;
}

}  // namespace pbg
