#include "pbigraph/graph_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pbigraph/error.hpp"
#include "pbigraph/parallel.hpp"

namespace pbg {

WeightedGraph::WeightedGraph(Parts parts)
    : cloud_(std::move(parts.cloud)),
      kernel_(parts.kernel),
      epsilon_(parts.epsilon),
      unit_weights_(parts.unit_weights),
      row_ptr_(std::move(parts.row_ptr)),
      cols_(std::move(parts.cols)),
      values_(std::move(parts.values)),
      uniform_(parts.uniform) {
  require_arg(cloud_ != nullptr, "WeightedGraph: missing point cloud");
  require_arg(epsilon_ > 0.0, "WeightedGraph: eps must be > 0");
  require_length(row_ptr_.size(), cloud_->size() + 1, "WeightedGraph row_ptr");
  require_arg(row_ptr_.back() == cols_.size(), "WeightedGraph: row_ptr does not match column count");
  if (!values_.empty()) require_length(values_.size(), cols_.size(), "WeightedGraph values");
}

double WeightedGraph::weight(std::size_t i, std::size_t j) const {
  const auto r = row(i);
  auto it = std::lower_bound(r.begin(), r.end(), static_cast<std::uint32_t>(j));
  if (it == r.end() || *it != j) return 0.0;
  return weight_at(row_ptr_[i] + static_cast<std::size_t>(it - r.begin()));
}

double WeightedGraph::laplacian_scale() const { return 1.0 / (static_cast<double>(n()) * epsilon_ * epsilon_); }

WeightedGraph WeightedGraph::with_perturbed_entry(std::size_t i, std::size_t slot, double delta) const {
  require_arg(i < n() && slot < degree(i), "with_perturbed_entry: entry out of range");
  Parts parts{cloud_, kernel_, epsilon_, unit_weights_, row_ptr_, cols_, values_, uniform_};
  if (parts.values.empty()) parts.values.assign(cols_.size(), uniform_);
  parts.values[row_ptr_[i] + slot] += delta;
  return WeightedGraph(std::move(parts));
}

namespace {

WeightedGraph assemble(const PointCloud& cloud, const Kernel& kernel, double eps, bool unit) {
  require_arg(eps > 0.0 && std::isfinite(eps), "assemble_graph: eps must be > 0");
  const std::size_t n = cloud.size();
  const int d = cloud.dim();
  const double radius = unit ? eps : kernel.support_radius() * eps;
  NeighborIndex index(cloud, radius);

  std::vector<std::uint64_t> row_ptr(n + 1, 0);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      std::uint64_t count = 0;
      index.for_each_within(cloud.point(i), radius, [&](std::uint32_t j, double) { count += (j != i); });
      row_ptr[i + 1] = count;
    }
  });
  for (std::size_t i = 0; i < n; ++i) row_ptr[i + 1] += row_ptr[i];

  const bool uniform = unit || kernel.kind() == Kernel::Kind::indicator;
  std::vector<std::uint32_t> cols(row_ptr[n]);
  std::vector<double> values(uniform ? 0 : row_ptr[n]);
  const double scale = std::pow(eps, -d);

  parallel_for(n, [&](std::size_t b, std::size_t e) {
    std::vector<std::pair<std::uint32_t, double>> nb;
    for (std::size_t i = b; i < e; ++i) {
      nb.clear();
      index.for_each_within(cloud.point(i), radius, [&](std::uint32_t j, double dd) {
        if (j != i) nb.emplace_back(j, dd);
      });
      std::sort(nb.begin(), nb.end());
      std::uint64_t k = row_ptr[i];
      for (const auto& [j, dd] : nb) {
        cols[k] = j;
        if (!uniform) values[k] = scale * kernel(std::sqrt(dd) / eps);
        ++k;
      }
    }
  });

  WeightedGraph::Parts parts;
  parts.cloud = std::make_shared<const PointCloud>(cloud);
  parts.kernel = unit ? Kernel::indicator(1.0) : kernel;
  parts.epsilon = eps;
  parts.unit_weights = unit;
  parts.row_ptr = std::move(row_ptr);
  parts.cols = std::move(cols);
  parts.values = std::move(values);
  parts.uniform = unit ? 1.0 : (uniform ? scale * kernel(0.0) : 0.0);
  return WeightedGraph(std::move(parts));
}

}  // namespace

WeightedGraph assemble_graph(const PointCloud& cloud, const Kernel& kernel, double eps) {
  return assemble(cloud, kernel, eps, false);
}

WeightedGraph assemble_unit_graph(const PointCloud& cloud, double eps) {
  return assemble(cloud, Kernel::indicator(1.0), eps, true);
}

void graph_laplacian(const WeightedGraph& g, std::span<const double> u, std::span<double> out,
                     LaplacianScaling scaling) {
  require_length(u.size(), g.n(), "graph_laplacian input");
  require_length(out.size(), g.n(), "graph_laplacian output");
  const double c = scaling == LaplacianScaling::scaled ? g.laplacian_scale() : 1.0;
  const auto row_ptr = g.row_ptr();
  const auto cols = g.cols();
  if (g.has_uniform_weights()) {
    const double w = c * g.weight_at(0);
    parallel_for(g.n(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const double ui = u[i];
        // Four independent partial sums hide the floating-point add latency.
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        std::uint64_t k = row_ptr[i];
        const std::uint64_t end = row_ptr[i + 1];
        for (; k + 4 <= end; k += 4) {
          s0 += u[cols[k]] - ui;
          s1 += u[cols[k + 1]] - ui;
          s2 += u[cols[k + 2]] - ui;
          s3 += u[cols[k + 3]] - ui;
        }
        for (; k < end; ++k) s0 += u[cols[k]] - ui;
        out[i] = w * ((s0 + s1) + (s2 + s3));
      }
    });
  } else {
    parallel_for(g.n(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const double ui = u[i];
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        std::uint64_t k = row_ptr[i];
        const std::uint64_t end = row_ptr[i + 1];
        for (; k + 4 <= end; k += 4) {
          s0 += g.weight_at(k) * (u[cols[k]] - ui);
          s1 += g.weight_at(k + 1) * (u[cols[k + 1]] - ui);
          s2 += g.weight_at(k + 2) * (u[cols[k + 2]] - ui);
          s3 += g.weight_at(k + 3) * (u[cols[k + 3]] - ui);
        }
        for (; k < end; ++k) s0 += g.weight_at(k) * (u[cols[k]] - ui);
        out[i] = c * ((s0 + s1) + (s2 + s3));
      }
    });
  }
}

std::vector<double> graph_laplacian(const WeightedGraph& g, std::span<const double> u, LaplacianScaling scaling) {
  std::vector<double> out(g.n());
  graph_laplacian(g, u, out, scaling);
  return out;
}

double signed_power(double s, double p) {
  if (s == 0.0) return 0.0;
  if (p == 2.0) return s;
  return std::copysign(std::pow(std::abs(s), p - 1.0), s);
}

double p_dirichlet_energy(const WeightedGraph& g, std::span<const double> u, double p) {
  require_arg(p >= 1.0, "p_dirichlet_energy: p must be >= 1");
  require_length(u.size(), g.n(), "p_dirichlet_energy input");
  const std::size_t n = g.n();
  std::vector<double> rows(n);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double s = 0.0;
      for (std::uint64_t k = g.row_ptr()[i]; k < g.row_ptr()[i + 1]; ++k) {
        s += g.weight_at(k) * std::pow(std::abs(u[i] - u[g.cols()[k]]), p);
      }
      rows[i] = s;
    }
  });
  const double nn = static_cast<double>(n);
  return pairwise_sum(rows) / (nn * nn * std::pow(g.epsilon(), p));
}

double p_biharmonic_energy(const WeightedGraph& g, std::span<const double> u, std::span<const double> f, double p,
                           double lambda) {
  require_arg(p > 1.0, "p_biharmonic_energy: p must be > 1");
  require_arg(lambda >= 0.0, "p_biharmonic_energy: lambda must be >= 0");
  require_length(u.size(), g.n(), "p_biharmonic_energy u");
  require_length(f.size(), g.n(), "p_biharmonic_energy f");
  const std::size_t n = g.n();
  const auto lap = graph_laplacian(g, u);
  std::vector<double> reg(n), fid(n);
  for (std::size_t i = 0; i < n; ++i) {
    reg[i] = std::pow(std::abs(lap[i]), p);
    fid[i] = (u[i] - f[i]) * (u[i] - f[i]);
  }
  const double nn = static_cast<double>(n);
  return pairwise_sum(reg) / (p * nn) + lambda / (2.0 * nn) * pairwise_sum(fid);
}

std::vector<double> p_biharmonic_residual(const WeightedGraph& g, std::span<const double> u,
                                          std::span<const double> f, double p, double lambda) {
  require_arg(p > 1.0, "p_biharmonic_residual: p must be > 1");
  require_length(u.size(), g.n(), "p_biharmonic_residual u");
  require_length(f.size(), g.n(), "p_biharmonic_residual f");
  auto v = graph_laplacian(g, u);
  for (double& x : v) x = signed_power(x, p);
  auto r = graph_laplacian(g, v);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = -r[i] + lambda * (f[i] - u[i]);
  return r;
}

}  // namespace pbg
