#include "pbigraph/grid.hpp"

#include "pbigraph/error.hpp"

namespace pbg {

GridSpec::GridSpec(BoxDomain domain, std::vector<int> shape) : domain_(std::move(domain)), shape_(std::move(shape)) {
  const int d = domain_.dim();
  require_length(shape_.size(), static_cast<std::size_t>(d), "grid shape");
  h_.resize(d);
  stride_.resize(d);
  size_ = 1;
  cell_volume_ = 1.0;
  for (int k = d - 1; k >= 0; --k) {
    require_arg(shape_[k] >= 3, "grid shape must be >= 3 along every axis");
    h_[k] = domain_.side(k) / shape_[k];
    stride_[k] = size_;
    size_ *= static_cast<std::size_t>(shape_[k]);
    cell_volume_ *= h_[k];
  }
}

void GridSpec::unravel(std::size_t lin, std::span<int> idx) const {
  for (int k = dim() - 1; k >= 0; --k) {
    idx[k] = static_cast<int>(lin % shape_[k]);
    lin /= shape_[k];
  }
}

std::size_t GridSpec::ravel(std::span<const int> idx) const {
  std::size_t lin = 0;
  for (int k = 0; k < dim(); ++k) lin += static_cast<std::size_t>(idx[k]) * stride_[k];
  return lin;
}

void GridSpec::center(std::size_t lin, std::span<double> x) const {
  for (int k = dim() - 1; k >= 0; --k) {
    const auto i = lin % shape_[k];
    lin /= shape_[k];
    x[k] = domain_.lo(k) + (static_cast<double>(i) + 0.5) * h_[k];
  }
}

std::vector<double> GridSpec::center(std::size_t lin) const {
  std::vector<double> x(dim());
  center(lin, x);
  return x;
}

GridFunction::GridFunction(GridSpec g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  require_length(values.size(), grid.size(), "grid function values");
}

GridFunction GridFunction::sample(const GridSpec& g, const std::function<double(std::span<const double>)>& f) {
  GridFunction out(g);
  std::vector<double> x(g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.center(i, x);
    out.values[i] = f(x);
  }
  return out;
}

std::vector<double> density_on_grid(const GridSpec& g, const Density& rho) {
  return GridFunction::sample(g, [&](std::span<const double> x) { return rho(x); }).values;
}

}  // namespace pbg
