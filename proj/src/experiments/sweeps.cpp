#include <algorithm>
#include <cmath>
#include <random>

#include "pbigraph/continuum.hpp"
#include "pbigraph/error.hpp"
#include "pbigraph/experiments.hpp"
#include "pbigraph/graph_ops.hpp"
#include "pbigraph/parallel.hpp"
#include "pbigraph/transport.hpp"

namespace pbg::exp {

double median(std::vector<double> v) {
  require_arg(!v.empty(), "median of an empty list");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<ConsistencyRow> consistency_sweep(const BoxDomain& domain, const Density& rho, const Kernel& kernel,
                                              const AnalyticFunction& phi, const std::vector<int>& grid_shape,
                                              const std::vector<double>& epsilons, double interior_margin) {
  const GridSpec grid(domain, grid_shape);
  std::vector<ConsistencyRow> rows;
  for (double eps : epsilons) {
    const auto cfg = NonlocalConfig::make(kernel, eps, rho);
    rows.push_back({eps, grid.spacing(0), consistency_error(phi, cfg, grid, interior_margin)});
  }
  return rows;
}

namespace {

struct Job {
  std::size_t index;  // position in n_list
  long long n;
  std::uint64_t seed;
};

std::vector<Job> jobs_of(const ExperimentConfig& cfg) {
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i)
    for (auto s : cfg.seeds) jobs.push_back({i, cfg.n_list[i], s});
  return jobs;
}

// One row per job; rows land in job order whatever the worker count.
template <class Row, class F>
std::vector<Row> run_jobs(const std::vector<Job>& jobs, F&& work) {
  std::vector<Row> rows(jobs.size());
  parallel_for(
      jobs.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) rows[k] = work(jobs[k]);
      },
      1);
  return rows;
}

PointCloud sampled(const ExperimentConfig& cfg, const Density& rho, long long n, std::uint64_t seed) {
  return sort_spatially(sample_point_cloud(cfg.domain, rho, n, seed));
}

}  // namespace

std::vector<GraphConsistencyRow> graph_consistency_sweep(const ExperimentConfig& cfg, bool include_control,
                                                         bool interior_only, double interior_margin) {
  const Density rho = cfg.density.make(cfg.domain);
  const auto phi = AnalyticFunction::from_name(cfg.preset, cfg.domain);
  const double sigma = sigma_eta(cfg.kernel, cfg.domain.dim()).value;
  const auto jobs = jobs_of(cfg);
  std::vector<Job> all;
  std::vector<std::string> rule;
  for (const auto& j : jobs) {
    all.push_back(j);
    rule.push_back("rule");
  }
  if (include_control) {
    for (const auto& j : jobs) {
      all.push_back(j);
      rule.push_back("control");
    }
  }
  std::vector<GraphConsistencyRow> rows(all.size());
  parallel_for(
      all.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
          const auto& j = all[k];
          const double eps = rule[k] == "rule" ? cfg.epsilon_rule(j.n, j.index) : 1.0 / std::sqrt(double(j.n));
          const auto cloud = sampled(cfg, rho, j.n, j.seed);
          rows[k] = {rule[k], j.n, j.seed, eps,
                     graph_consistency_error(cloud, cfg.kernel, eps, phi, rho, sigma, interior_margin, interior_only)};
        }
      },
      1);
  return rows;
}

std::vector<ConvergenceRow> convergence_sweep(const ExperimentConfig& cfg) {
  const Density rho = cfg.density.make(cfg.domain);
  const auto u_star = AnalyticFunction::from_name(cfg.preset, cfg.domain);
  const double sigma = sigma_eta(cfg.kernel, cfg.domain.dim()).value;
  const GridSpec grid(cfg.domain, cfg.grid_shape);
  const auto problem = manufactured_forcing(u_star, cfg.p, cfg.lambda, grid, rho, sigma);
  const auto u_ref = u_star.on_grid(grid);
  const int d = cfg.domain.dim();

  return run_jobs<ConvergenceRow>(jobs_of(cfg), [&](const Job& j) {
    const auto cloud = sampled(cfg, rho, j.n, j.seed);
    const double eps = cfg.epsilon_rule(j.n, j.index);
    const auto g = assemble_graph(cloud, cfg.kernel, eps);
    const std::size_t n = cloud.size();
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = problem.forcing_at(cloud.point(i));
    auto solver = cfg.solver;
    solver.p = cfg.p;
    solver.lambda = cfg.lambda;
    const auto sol = solve_graph_p_biharmonic(g, f, solver);
    const auto map = voronoi_map(cloud, grid);

    ConvergenceRow row{};
    row.n = j.n;
    row.seed = j.seed;
    row.epsilon = eps;
    row.lp_error = lp_error(sol.u, map, u_ref, cfg.p, rho);
    row.tlp_upper = tlp_distance(sol.u, map, u_ref, cfg.p, rho);
    row.sup_displacement = map.sup_displacement();
    row.delta_n = DeltaN::make(j.n, d).value;
    row.max_abs_u = 0.0;
    for (double v : sol.u) row.max_abs_u = std::max(row.max_abs_u, std::abs(v));
    // (1/n) sum |Lap u|^p + (lambda/2n) sum u^2 <= (lambda/2n) sum f^2
    const auto lap = graph_laplacian(g, sol.u);
    std::vector<double> a(n), b(n), c(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = std::pow(std::abs(lap[i]), cfg.p);
      b[i] = sol.u[i] * sol.u[i];
      c[i] = f[i] * f[i];
    }
    const double nn = static_cast<double>(n);
    row.apriori_lhs = pairwise_sum(a) / nn + cfg.lambda / (2.0 * nn) * pairwise_sum(b);
    row.apriori_rhs = cfg.lambda / (2.0 * nn) * pairwise_sum(c);
    row.iterations = sol.report.iterations;
    row.status = sol.report.status;
    return row;
  });
}

std::vector<DenoiseRow> denoise_sweep(const ExperimentConfig& cfg) {
  const Density rho = cfg.density.make(cfg.domain);
  const auto u_star = AnalyticFunction::from_name(cfg.preset, cfg.domain);
  std::vector<Job> jobs;
  std::vector<double> ps;
  for (double p : cfg.p_list) {
    for (const auto& j : jobs_of(cfg)) {
      jobs.push_back(j);
      ps.push_back(p);
    }
  }
  std::vector<DenoiseRow> rows(jobs.size());
  parallel_for(
      jobs.size(),
      [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
          const auto& j = jobs[k];
          const auto cloud = sampled(cfg, rho, j.n, j.seed);
          const double eps = cfg.epsilon_rule(j.n, j.index);
          const auto g = assemble_graph(cloud, cfg.kernel, eps);
          const std::size_t n = cloud.size();
          std::mt19937_64 rng(j.seed * 7919 + 17);
          std::normal_distribution<double> gauss(0.0, 1.0);
          std::vector<double> clean(n), f(n);
          for (std::size_t i = 0; i < n; ++i) {
            clean[i] = u_star(cloud.point(i));
            f[i] = clean[i] + cfg.noise * gauss(rng);
          }
          auto solver = cfg.solver;
          solver.p = ps[k];
          solver.lambda = cfg.lambda;
          const auto sol = solve_graph_p_biharmonic(g, f, solver);
          std::vector<double> e0(n), e1(n);
          for (std::size_t i = 0; i < n; ++i) {
            e0[i] = (f[i] - clean[i]) * (f[i] - clean[i]);
            e1[i] = (sol.u[i] - clean[i]) * (sol.u[i] - clean[i]);
          }
          const double nn = static_cast<double>(n);
          rows[k] = {ps[k],
                     j.n,
                     j.seed,
                     cfg.noise,
                     cfg.lambda,
                     std::sqrt(pairwise_sum(e0) / nn),
                     std::sqrt(pairwise_sum(e1) / nn),
                     sol.report.iterations,
                     sol.report.status};
        }
      },
      1);
  return rows;
}

std::vector<PoincareRow> poincare_sweep(const ExperimentConfig& cfg) {
  const Density rho = cfg.density.make(cfg.domain);
  const GridSpec grid(cfg.domain, cfg.grid_shape);
  std::vector<PoincareRow> rows;
  for (const auto& name : cfg.presets) {
    const auto u = AnalyticFunction::from_name(name, cfg.domain).on_grid(grid);
    for (double eps : cfg.epsilons) {
      const auto nl = NonlocalConfig::make(cfg.kernel, eps, rho);
      rows.push_back({name, eps, nonlocal_poincare_ratio(u, nl, cfg.p)});
    }
  }
  return rows;
}

}  // namespace pbg::exp
