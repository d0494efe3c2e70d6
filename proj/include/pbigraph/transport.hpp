#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pbigraph/geometry.hpp"
#include "pbigraph/grid.hpp"

namespace pbg {

/// Nearest-sample assignment of every grid cell center, used as a stand-in
/// for a transport map from the density to the empirical measure.
struct VoronoiMap {
  GridSpec grid;
  std::vector<std::uint32_t> assignment;
  /// |x - T(x)| per cell.
  std::vector<double> displacement;

  double sup_displacement() const;
};

/// Exact nearest neighbor (ties to the lowest id) for each cell center.
VoronoiMap voronoi_map(const PointCloud& cloud, const GridSpec& grid);

/// delta_n = (ln n / n)^{1/d}.
struct DeltaN {
  long long n;
  int d;
  double value;

  static DeltaN make(long long n, int d);
};

/// (sum_cells |u_n(T x) - u_ref(x)|^p rho(x) h^d)^{1/p}.
double lp_error(std::span<const double> u_n, const VoronoiMap& map, const GridFunction& u_ref, double p,
                const Density& rho);

/// Plug-in upper bound for the TL^p distance using T:
/// (sum_cells [|x - T x|^p + |u_ref(x) - u_n(T x)|^p] rho h^d)^{1/p}.
double tlp_distance(std::span<const double> u_n, const VoronoiMap& map, const GridFunction& u_ref, double p,
                    const Density& rho);

}  // namespace pbg
