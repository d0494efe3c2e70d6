#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pbigraph/geometry.hpp"
#include "pbigraph/graph_ops.hpp"
#include "pbigraph/grid.hpp"

namespace pbg::io {

/// Header "x0,...,x{d-1}", one point per row.
void write_cloud_csv(std::ostream& os, const PointCloud& cloud);
PointCloud read_cloud_csv(std::istream& is, const BoxDomain& domain);

/// Raw little-endian float64, row-major, no header.
void write_values_binary(const std::string& path, std::span<const double> values);
std::vector<double> read_values_binary(const std::string& path);

/// "vertex_id,value".
void write_graph_function_csv(std::ostream& os, std::span<const double> u);
std::vector<double> read_graph_function_csv(std::istream& is);

/// Matrix Market "coordinate real symmetric", lower triangle, 1-based.
void write_matrix_market(std::ostream& os, const WeightedGraph& g);

/// "i,j,...,value" with one index column per axis.
void write_grid_csv(std::ostream& os, const GridFunction& g);

void write_text(const std::string& path, const std::string& text);

}  // namespace pbg::io
