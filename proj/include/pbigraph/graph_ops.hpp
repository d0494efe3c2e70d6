#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "pbigraph/geometry.hpp"
#include "pbigraph/kernels.hpp"

namespace pbg {

/// Symmetric epsilon-neighborhood graph in compressed-row form with sorted
/// column indices and no diagonal. Weights are stored only when they vary;
/// indicator kernels share a single value.
class WeightedGraph {
 public:
  struct Parts {
    std::shared_ptr<const PointCloud> cloud;
    Kernel kernel = Kernel::indicator();
    double epsilon = 0.0;
    bool unit_weights = false;
    std::vector<std::uint64_t> row_ptr;
    std::vector<std::uint32_t> cols;
    std::vector<double> values;  // empty when every weight equals `uniform`
    double uniform = 0.0;
  };

  explicit WeightedGraph(Parts parts);

  std::size_t n() const { return row_ptr_.size() - 1; }
  double epsilon() const { return epsilon_; }
  int dim() const { return cloud_->dim(); }
  const Kernel& kernel() const { return kernel_; }
  const PointCloud& cloud() const { return *cloud_; }
  /// True for the unit-weight graph G' (W'_ij = 1 within eps).
  bool unit_weights() const { return unit_weights_; }

  std::size_t nnz() const { return cols_.size(); }
  std::span<const std::uint64_t> row_ptr() const { return row_ptr_; }
  std::span<const std::uint32_t> cols() const { return cols_; }
  std::span<const std::uint32_t> row(std::size_t i) const {
    return {cols_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }
  bool has_uniform_weights() const { return values_.empty(); }
  double weight_at(std::size_t k) const { return values_.empty() ? uniform_ : values_[k]; }
  /// W_ij, zero when j is not a neighbor of i.
  double weight(std::size_t i, std::size_t j) const;
  std::size_t degree(std::size_t i) const { return static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i]); }

  /// 1 / (n eps^2), the factor in front of the weighted difference sum.
  double laplacian_scale() const;

  /// Copy with W_ij (slot `slot` of row i) shifted by delta; the mirror entry is
  /// left alone, so the result is deliberately asymmetric. Used as a negative
  /// control by the identity suite.
  WeightedGraph with_perturbed_entry(std::size_t i, std::size_t slot, double delta) const;

 private:
  std::shared_ptr<const PointCloud> cloud_;
  Kernel kernel_;
  double epsilon_;
  bool unit_weights_;
  std::vector<std::uint64_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
  double uniform_;
};

/// W_ij = eta_eps(|x_i - x_j|) for |x_i - x_j| < R eps, i != j.
WeightedGraph assemble_graph(const PointCloud& cloud, const Kernel& kernel, double eps);

/// Unit-weight graph G': W'_ij = 1 whenever |x_i - x_j| < eps.
WeightedGraph assemble_unit_graph(const PointCloud& cloud, double eps);

enum class LaplacianScaling {
  scaled,    ///< (1/(n eps^2)) sum_j W_ij (u_j - u_i)
  unscaled,  ///< sum_j W_ij (u_j - u_i)
};

void graph_laplacian(const WeightedGraph& g, std::span<const double> u, std::span<double> out,
                     LaplacianScaling scaling = LaplacianScaling::scaled);
std::vector<double> graph_laplacian(const WeightedGraph& g, std::span<const double> u,
                                    LaplacianScaling scaling = LaplacianScaling::scaled);

/// (1/(n^2 eps^p)) sum_{i,j} W_ij |u_i - u_j|^p over ordered pairs.
double p_dirichlet_energy(const WeightedGraph& g, std::span<const double> u, double p);

/// E_n(u) = (1/(p n)) sum |Lap u|^p + (lambda/(2n)) sum |u - f|^2.
double p_biharmonic_energy(const WeightedGraph& g, std::span<const double> u, std::span<const double> f, double p,
                           double lambda);

/// r = -Lap(|Lap u|^{p-2} Lap u) + lambda (f - u) with |0|^{p-2} 0 = 0.
/// Equals -n grad E_n(u).
std::vector<double> p_biharmonic_residual(const WeightedGraph& g, std::span<const double> u,
                                          std::span<const double> f, double p, double lambda);

/// |s|^{p-2} s, with the value 0 at s = 0 for every p > 1.
double signed_power(double s, double p);

}  // namespace pbg
