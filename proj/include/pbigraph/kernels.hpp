#pragma once

#include <string>

namespace pbg {

/// Radial, nonincreasing, compactly supported weight profile eta(s).
class Kernel {
 public:
  enum class Kind { indicator, truncated_linear, smooth_bump };

  /// eta(s) = 1 for s < R.
  static Kernel indicator(double support_radius = 1.0);
  /// eta(s) = (R - s)_+.  R = 2 gives eta(1) = 1 and eta(2) = 0.
  static Kernel truncated_linear(double support_radius = 2.0);
  /// eta(s) = exp(1 - 1 / (1 - (s/R)^2)) for s < R.
  static Kernel smooth_bump(double support_radius = 1.0);
  /// Parses "indicator" | "truncated-linear" | "smooth-bump".
  static Kernel from_name(const std::string& name, double support_radius);

  Kernel scaled(double c) const;

  Kind kind() const { return kind_; }
  std::string name() const;
  double support_radius() const { return radius_; }
  double scale() const { return scale_; }

  double operator()(double s) const;

  bool operator==(const Kernel&) const = default;

 private:
  Kernel(Kind kind, double radius, double scale) : kind_(kind), radius_(radius), scale_(scale) {}

  Kind kind_;
  double radius_;
  double scale_;
};

/// eta_eps(s) = eps^{-d} eta(s / eps).
double eval_rescaled(const Kernel& kernel, double eps, double s, int d);

struct SigmaEta {
  enum class Method { closed_form, quadrature };
  double value = 0.0;
  int d = 0;
  Method method = Method::closed_form;
};

/// sigma_eta = int_{R^d} eta(|z|) z_1^2 dz, closed form for indicator and
/// truncated-linear profiles, adaptive radial quadrature otherwise.
SigmaEta sigma_eta(const Kernel& kernel, int d);

/// Always uses the radial quadrature (S_{d-1}/d) int_0^R eta(r) r^{d+1} dr.
double sigma_eta_quadrature(const Kernel& kernel, int d);

/// int_{R^d} eta(|z|) dz, the mass of the unscaled profile.
double kernel_mass(const Kernel& kernel, int d);

/// Surface area of the unit sphere in R^d.
double unit_sphere_area(int d);

}  // namespace pbg
