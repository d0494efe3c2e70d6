#include "pbigraph/nonlocal.hpp"

#include <algorithm>
#include <cmath>

#include "pbigraph/error.hpp"
#include "pbigraph/parallel.hpp"

namespace pbg {

NonlocalConfig NonlocalConfig::make(const Kernel& kernel, double epsilon, const Density& density) {
  require_arg(epsilon > 0.0, "nonlocal: eps must be > 0");
  const auto& dom = density.domain();
  require_arg(kernel.support_radius() * epsilon < 0.5 * dom.min_side(),
              "nonlocal: kernel support R*eps must be below half the smallest side");
  return {kernel, epsilon, density, sigma_eta(kernel, dom.dim())};
}

NonlocalOperator::NonlocalOperator(const GridSpec& grid, const NonlocalConfig& cfg) : grid_(grid), cfg_(cfg) {
  require_arg(grid.domain() == cfg.density.domain(), "nonlocal: grid and density live on different domains");
  const int d = grid.dim();
  const double eps = cfg.epsilon;
  const double reach = cfg.kernel.support_radius() * eps;
  std::vector<int> m(d);
  for (int k = 0; k < d; ++k) {
    require(reach / grid.spacing(k) >= 4.0, ErrorCode::resolution,
            "nonlocal: kernel support spans fewer than 4 cells along axis " + std::to_string(k));
    m[k] = static_cast<int>(std::ceil(reach / grid.spacing(k)));
  }
  const double cell = grid.cell_volume();
  const double scale = std::pow(eps, -d) * cell;

  // Enumerate prefix offsets in [-m, m]^{d-1}.
  std::vector<int> pre(static_cast<std::size_t>(d - 1), 0);
  for (int k = 0; k < d - 1; ++k) pre[k] = -m[k];
  const int last = d - 1;
  const double hl = grid.spacing(last);
  for (;;) {
    double base2 = 0.0;
    for (int k = 0; k < d - 1; ++k) base2 += (pre[k] * grid.spacing(k)) * (pre[k] * grid.spacing(k));
    if (base2 < reach * reach) {
      Line line;
      line.prefix = pre;
      int lo = 0, hi = -1;
      std::vector<double> w;
      for (int o = -m[last]; o <= m[last]; ++o) {
        const double dd = base2 + (o * hl) * (o * hl);
        if (!within_radius(dd, reach)) continue;
        if (hi < lo) lo = o;
        hi = o;
        w.push_back(scale * cfg.kernel(std::sqrt(dd) / eps));
      }
      if (hi >= lo) {
        line.first = lo;
        line.weights = std::move(w);
        lines_.push_back(std::move(line));
      }
    }
    int k = 0;
    while (k < d - 1 && pre[k] == m[k]) {
      pre[k] = -m[k];
      ++k;
    }
    if (k >= d - 1) break;
    ++pre[k];
  }

  rho_ = density_on_grid(grid, cfg.density);
  mass_.assign(grid.size(), 0.0);
  sweep(mass_, [&](std::size_t, std::size_t y) { return rho_[y]; });
}

template <class Term>
void NonlocalOperator::sweep(std::span<double> out, Term term) const {
  const int d = grid_.dim();
  const int last = d - 1;
  const int nl = grid_.shape(last);
  const std::size_t rows = grid_.size() / static_cast<std::size_t>(nl);
  parallel_for(
      rows,
      [&](std::size_t b, std::size_t e) {
        std::vector<int> idx(d), src(d);
        std::vector<double> acc(nl);
        for (std::size_t r = b; r < e; ++r) {
          grid_.unravel(r * nl, idx);
          std::fill(acc.begin(), acc.end(), 0.0);
          const std::size_t x0 = r * nl;
          for (const auto& line : lines_) {
            bool inside = true;
            for (int k = 0; k < last; ++k) {
              src[k] = idx[k] + line.prefix[k];
              if (src[k] < 0 || src[k] >= grid_.shape(k)) {
                inside = false;
                break;
              }
            }
            if (!inside) continue;
            src[last] = 0;
            const std::size_t y0 = grid_.ravel(src);
            for (std::size_t t = 0; t < line.weights.size(); ++t) {
              const int o = line.first + static_cast<int>(t);
              const double w = line.weights[t];
              const int jb = std::max(0, -o), je = std::min(nl, nl - o);
              for (int j = jb; j < je; ++j) acc[j] += w * term(x0 + j, y0 + j + o);
            }
          }
          std::copy(acc.begin(), acc.end(), out.begin() + static_cast<std::ptrdiff_t>(x0));
        }
      },
      1);
}

void NonlocalOperator::apply(std::span<const double> u, std::span<double> out) const {
  require_length(u.size(), grid_.size(), "nonlocal input");
  require_length(out.size(), grid_.size(), "nonlocal output");
  const double inv = 1.0 / (cfg_.epsilon * cfg_.epsilon);
  std::vector<double> ru(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) ru[i] = rho_[i] * u[i];
  // rho_y u_y - u_x rho_y vanishes exactly when u is constant.
  sweep(out, [&](std::size_t x, std::size_t y) { return ru[y] - u[x] * rho_[y]; });
  for (double& v : out) v *= inv;
}

std::vector<double> NonlocalOperator::apply(std::span<const double> u) const {
  std::vector<double> out(u.size());
  apply(u, out);
  return out;
}

double NonlocalOperator::nonlocal_p_energy(std::span<const double> u, double p) const {
  require_length(u.size(), grid_.size(), "nonlocal energy input");
  std::vector<double> rows(u.size());
  if (p == 2.0) {
    sweep(rows, [&](std::size_t x, std::size_t y) {
      const double t = u[y] - u[x];
      return t * t;
    });
  } else {
    sweep(rows, [&](std::size_t x, std::size_t y) { return std::pow(std::abs(u[y] - u[x]), p); });
  }
  return pairwise_sum(rows) * grid_.cell_volume() / std::pow(cfg_.epsilon, p);
}

GridFunction nonlocal_laplacian(const GridFunction& u, const NonlocalConfig& cfg) {
  NonlocalOperator op(u.grid, cfg);
  return GridFunction(u.grid, op.apply(u.values));
}

GridFunction nonlocal_poisson_residual(const GridFunction& u, const GridFunction& h, const NonlocalConfig& cfg) {
  require_arg(u.grid == h.grid, "nonlocal_poisson_residual: grid mismatch");
  auto r = nonlocal_laplacian(u, cfg);
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] = -r.values[i] - h.values[i];
  return r;
}

RichardsonResult nonlocal_richardson(const NonlocalOperator& op, std::span<const double> h, int iterations,
                                     double omega) {
  const std::size_t n = op.grid().size();
  require_length(h.size(), n, "richardson rhs");
  require_arg(omega > 0.0 && omega <= 0.5, "richardson: omega must lie in (0, 1/2]");
  const double eps2 = op.config().epsilon * op.config().epsilon;
  const auto& m = op.mass();
  const auto& rho = op.rho();
  RichardsonResult res;
  res.u.assign(n, 0.0);
  std::vector<double> r(n), sq(n);
  for (int it = 0; it <= iterations; ++it) {
    op.apply(res.u, r);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = -r[i] - h[i];
      sq[i] = rho[i] * r[i] * r[i] / m[i];
    }
    res.residual_norms.push_back(std::sqrt(pairwise_sum(sq) * op.grid().cell_volume()));
    if (it == iterations) break;
    for (std::size_t i = 0; i < n; ++i) res.u[i] -= omega * eps2 * r[i] / m[i];
  }
  return res;
}

double nonlocal_poincare_ratio(const GridFunction& u, const NonlocalConfig& cfg, double p) {
  require_arg(p >= 1.0, "nonlocal_poincare_ratio: p must be >= 1");
  NonlocalOperator op(u.grid, cfg);
  const double den = op.nonlocal_p_energy(u.values, p);
  require(den > 0.0 && std::isfinite(den), ErrorCode::degenerate_input,
          "nonlocal_poincare_ratio: nonlocal energy vanishes (constant input)");
  const double vol = u.grid.domain().volume();
  const double mean = pairwise_sum(u.values) * u.grid.cell_volume() / vol;
  std::vector<double> dev(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) dev[i] = std::pow(std::abs(u.values[i] - mean), p);
  return pairwise_sum(dev) * u.grid.cell_volume() / den;
}

ConsistencyError consistency_error(const AnalyticFunction& phi, const NonlocalConfig& cfg, const GridSpec& grid,
                                   double interior_margin) {
  require_arg(phi.neumann_certified(), "consistency_error: preset '" + phi.name() + "' is not Neumann-certified");
  NonlocalOperator op(grid, cfg);
  const auto u = phi.on_grid(grid);
  const auto lap = op.apply(u.values);
  ConsistencyError err;
  std::vector<double> x(grid.dim());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.center(i, x);
    const double e = std::abs(lap[i] - phi.weighted_laplacian(x, cfg.density, cfg.sigma.value));
    err.sup_global = std::max(err.sup_global, e);
    ++err.count;
    if (grid.domain().distance_to_boundary(x) >= interior_margin) {
      err.sup_interior = std::max(err.sup_interior, e);
      ++err.interior_count;
    }
  }
  return err;
}

namespace {

template <class LapAt>
ConsistencyError graph_error(const PointCloud& cloud, const AnalyticFunction& phi, const Density& rho, double sigma,
                             double margin, bool interior_only, LapAt lap_at) {
  const std::size_t n = cloud.size();
  std::vector<double> err(n, 0.0);
  std::vector<char> inner(n);
  for (std::size_t i = 0; i < n; ++i) inner[i] = cloud.domain.distance_to_boundary(cloud.point(i)) >= margin;
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      if (interior_only && !inner[i]) continue;
      err[i] = std::abs(lap_at(i) - phi.weighted_laplacian(cloud.point(i), rho, sigma));
    }
  });
  ConsistencyError out;
  out.count = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!interior_only) out.sup_global = std::max(out.sup_global, err[i]);
    if (inner[i]) {
      out.sup_interior = std::max(out.sup_interior, err[i]);
      ++out.interior_count;
    }
  }
  return out;
}

std::vector<double> sample_values(const PointCloud& cloud, const AnalyticFunction& phi) {
  std::vector<double> v(cloud.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = phi(cloud.point(i));
  return v;
}

}  // namespace

ConsistencyError graph_consistency_error(const WeightedGraph& g, const AnalyticFunction& phi, const Density& rho,
                                         double sigma, double interior_margin) {
  const auto u = sample_values(g.cloud(), phi);
  const auto lap = graph_laplacian(g, u);
  return graph_error(g.cloud(), phi, rho, sigma, interior_margin, false, [&](std::size_t i) { return lap[i]; });
}

ConsistencyError graph_consistency_error(const PointCloud& cloud, const Kernel& kernel, double eps,
                                         const AnalyticFunction& phi, const Density& rho, double sigma,
                                         double interior_margin, bool interior_only) {
  require_arg(eps > 0.0, "graph_consistency_error: eps must be > 0");
  const auto u = sample_values(cloud, phi);
  const double reach = kernel.support_radius() * eps;
  NeighborIndex index(cloud, reach);
  // Values permuted into bucket order keep the inner loop on contiguous memory.
  const auto order = index.order();
  std::vector<double> us(u.size());
  for (std::size_t t = 0; t < us.size(); ++t) us[t] = u[order[t]];
  const double scale = 1.0 / (static_cast<double>(cloud.size()) * eps * eps) * std::pow(eps, -cloud.dim());
  const bool flat = kernel.kind() == Kernel::Kind::indicator;
  return graph_error(cloud, phi, rho, sigma, interior_margin, interior_only, [&](std::size_t i) {
    double s = 0.0;
    const double ui = u[i];
    if (flat) {
      // The self term contributes u_i - u_i = 0.
      index.for_each_slot_within(cloud.point(i), reach, [&](std::uint32_t t, double) { s += us[t] - ui; });
      s *= kernel.scale();
    } else {
      index.for_each_slot_within(cloud.point(i), reach,
                                 [&](std::uint32_t t, double dd) { s += kernel(std::sqrt(dd) / eps) * (us[t] - ui); });
    }
    return scale * s;
  });
}

}  // namespace pbg
