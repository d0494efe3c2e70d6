#pragma once

#include <span>
#include <string>
#include <vector>

#include "pbigraph/geometry.hpp"
#include "pbigraph/grid.hpp"

namespace pbg {

/// Closed-form test functions with exact derivatives. Only cosine products
/// (and constants) are certified to satisfy du/dn = 0 on the box boundary.
class AnalyticFunction {
 public:
  enum class Kind { constant, cosine_product, affine, sine, radial_quadratic };

  static AnalyticFunction constant(const BoxDomain& domain, double c);
  /// A prod_j cos(pi k_j (x_j - lo_j) / L_j).
  static AnalyticFunction cosine_product(const BoxDomain& domain, std::vector<int> wavenumbers, double amplitude = 1.0);
  /// b + a . x
  static AnalyticFunction affine(const BoxDomain& domain, std::vector<double> a, double b = 0.0);
  /// sin(pi k (x_axis - lo) / L)
  static AnalyticFunction sine(const BoxDomain& domain, int axis = 0, int wavenumber = 1);
  /// |x - c|^2
  static AnalyticFunction radial_quadratic(const BoxDomain& domain, std::vector<double> center);
  /// Parses "constant" | "cosine" | "affine" | "sine" | "radial"; defaults for
  /// the parameters.
  static AnalyticFunction from_name(const std::string& name, const BoxDomain& domain);

  Kind kind() const { return kind_; }
  std::string name() const;
  const BoxDomain& domain() const { return domain_; }
  bool neumann_certified() const { return kind_ == Kind::constant || kind_ == Kind::cosine_product; }

  double operator()(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> g) const;
  double laplacian(std::span<const double> x) const;

  /// sigma (rho/2 Lap u + grad rho . grad u) = (sigma / (2 rho)) div(rho^2 grad u).
  double weighted_laplacian(std::span<const double> x, const Density& rho, double sigma) const;

  /// For cosine products: kappa with Lap u = -kappa u.
  double cosine_eigenvalue() const;

  GridFunction on_grid(const GridSpec& g) const;

 private:
  AnalyticFunction(Kind kind, BoxDomain domain) : kind_(kind), domain_(std::move(domain)) {}

  Kind kind_;
  BoxDomain domain_;
  std::vector<double> a_;  // wavenumbers, slopes or center, by kind
  double b_ = 0.0;         // amplitude, offset or constant
  int axis_ = 0;
};

}  // namespace pbg
