#include "pbigraph/transport.hpp"

#include <algorithm>
#include <cmath>

#include "pbigraph/error.hpp"
#include "pbigraph/parallel.hpp"

namespace pbg {

double VoronoiMap::sup_displacement() const {
  return displacement.empty() ? 0.0 : *std::max_element(displacement.begin(), displacement.end());
}

VoronoiMap voronoi_map(const PointCloud& cloud, const GridSpec& grid) {
  require_arg(cloud.size() >= 1, "voronoi_map: empty cloud");
  require_arg(cloud.domain == grid.domain(), "voronoi_map: cloud and grid live on different domains");
  const auto& dom = grid.domain();
  const double typical = std::pow(dom.volume() / static_cast<double>(cloud.size()), 1.0 / dom.dim());
  const NeighborIndex index(cloud, std::max(2.0 * typical, 1e-12 * dom.diameter()));
  VoronoiMap map{grid, std::vector<std::uint32_t>(grid.size()), std::vector<double>(grid.size())};
  parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
    std::vector<double> x(grid.dim());
    for (std::size_t i = b; i < e; ++i) {
      grid.center(i, x);
      const auto j = index.nearest(x);
      map.assignment[i] = j;
      map.displacement[i] = std::sqrt(squared_distance(x, cloud.point(j)));
    }
  });
  return map;
}

DeltaN DeltaN::make(long long n, int d) {
  require_arg(n >= 2, "delta_n: n must be >= 2");
  require_arg(d >= 1, "delta_n: d must be >= 1");
  const double nn = static_cast<double>(n);
  return {n, d, std::pow(std::log(nn) / nn, 1.0 / d)};
}

namespace {

double pulled_back_sum(std::span<const double> u_n, const VoronoiMap& map, const GridFunction& u_ref, double p,
                       const Density& rho, bool with_displacement) {
  require_arg(p >= 1.0, "transport error: p must be >= 1");
  require_arg(map.grid == u_ref.grid, "transport error: grid mismatch");
  require_arg(map.grid.size() > 0, "transport error: empty grid");
  const auto& grid = map.grid;
  std::vector<double> terms(grid.size());
  std::vector<double> x(grid.dim());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto j = map.assignment[i];
    require_arg(j < u_n.size(), "transport error: graph function shorter than the cloud");
    grid.center(i, x);
    double t = std::pow(std::abs(u_n[j] - u_ref.values[i]), p);
    if (with_displacement) t += std::pow(map.displacement[i], p);
    terms[i] = t * rho(x);
  }
  return pairwise_sum(terms) * grid.cell_volume();
}

}  // namespace

double lp_error(std::span<const double> u_n, const VoronoiMap& map, const GridFunction& u_ref, double p,
                const Density& rho) {
  return std::pow(pulled_back_sum(u_n, map, u_ref, p, rho, false), 1.0 / p);
}

double tlp_distance(std::span<const double> u_n, const VoronoiMap& map, const GridFunction& u_ref, double p,
                    const Density& rho) {
  return std::pow(pulled_back_sum(u_n, map, u_ref, p, rho, true), 1.0 / p);
}

}  // namespace pbg
