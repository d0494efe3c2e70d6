#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pbigraph/geometry.hpp"

namespace pbg {

/// Cell-centered tensor grid over a box. Linear indices run with the last axis
/// fastest.
class GridSpec {
 public:
  GridSpec(BoxDomain domain, std::vector<int> shape);

  const BoxDomain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  const std::vector<int>& shape() const { return shape_; }
  int shape(int k) const { return shape_[k]; }
  double spacing(int k) const { return h_[k]; }
  /// prod_k h_k.
  double cell_volume() const { return cell_volume_; }
  std::size_t size() const { return size_; }
  std::size_t stride(int k) const { return stride_[k]; }

  void unravel(std::size_t lin, std::span<int> idx) const;
  std::size_t ravel(std::span<const int> idx) const;
  void center(std::size_t lin, std::span<double> x) const;
  std::vector<double> center(std::size_t lin) const;

  bool operator==(const GridSpec& o) const { return domain_ == o.domain_ && shape_ == o.shape_; }

 private:
  BoxDomain domain_;
  std::vector<int> shape_;
  std::vector<double> h_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
};

struct GridFunction {
  GridSpec grid;
  std::vector<double> values;

  explicit GridFunction(GridSpec g) : grid(std::move(g)), values(grid.size(), 0.0) {}
  GridFunction(GridSpec g, std::vector<double> v);

  static GridFunction sample(const GridSpec& g, const std::function<double(std::span<const double>)>& f);

  std::size_t size() const { return values.size(); }
};

/// Values of a density at cell centers.
std::vector<double> density_on_grid(const GridSpec& g, const Density& rho);

}  // namespace pbg
