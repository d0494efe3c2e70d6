#include "pbigraph/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "pbigraph/error.hpp"

namespace pbg {

Kernel Kernel::indicator(double support_radius) {
  require_arg(support_radius > 0.0, "indicator kernel: support radius must be > 0");
  return Kernel(Kind::indicator, support_radius, 1.0);
}

Kernel Kernel::truncated_linear(double support_radius) {
  require_arg(support_radius > 0.0, "truncated-linear kernel: support radius must be > 0");
  return Kernel(Kind::truncated_linear, support_radius, 1.0);
}

Kernel Kernel::smooth_bump(double support_radius) {
  require_arg(support_radius > 0.0, "smooth-bump kernel: support radius must be > 0");
  return Kernel(Kind::smooth_bump, support_radius, 1.0);
}

Kernel Kernel::from_name(const std::string& name, double support_radius) {
  if (name == "indicator") return indicator(support_radius);
  if (name == "truncated-linear" || name == "truncated_linear") return truncated_linear(support_radius);
  if (name == "smooth-bump" || name == "smooth_bump") return smooth_bump(support_radius);
  fail(ErrorCode::invalid_argument, "unknown kernel '" + name + "'");
}

Kernel Kernel::scaled(double c) const {
  require_arg(c > 0.0, "Kernel::scaled: factor must be > 0");
  return Kernel(kind_, radius_, scale_ * c);
}

std::string Kernel::name() const {
  switch (kind_) {
    case Kind::indicator: return "indicator";
    case Kind::truncated_linear: return "truncated-linear";
    case Kind::smooth_bump: return "smooth-bump";
  }
  return "unknown";
}

double Kernel::operator()(double s) const {
  if (s >= radius_ || s < 0.0) return 0.0;
  switch (kind_) {
    case Kind::indicator: return scale_;
    case Kind::truncated_linear: return scale_ * (radius_ - s);
    case Kind::smooth_bump: {
      const double t = s / radius_;
      return scale_ * std::exp(1.0 - 1.0 / (1.0 - t * t));
    }
  }
  return 0.0;
}

double eval_rescaled(const Kernel& kernel, double eps, double s, int d) {
  require_arg(eps > 0.0, "eval_rescaled: eps must be > 0");
  require_arg(d >= 1, "eval_rescaled: d must be >= 1");
  return kernel(s / eps) / std::pow(eps, d);
}

double unit_sphere_area(int d) {
  require_arg(d >= 1, "unit_sphere_area: d must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

namespace {

// int_0^R eta(r) r^m dr by adaptive Gauss-Kronrod on the open support.
double radial_moment(const Kernel& kernel, int m) {
  using boost::math::quadrature::gauss_kronrod;
  const double R = kernel.support_radius();
  auto integrand = [&](double r) { return kernel(r) * std::pow(r, m); };
  double err = 0.0;
  const double val = gauss_kronrod<double, 61>::integrate(integrand, 0.0, R, 20, 1e-14, &err);
  return val;
}

}  // namespace

double sigma_eta_quadrature(const Kernel& kernel, int d) {
  require_arg(d >= 1, "sigma_eta: d must be >= 1");
  return unit_sphere_area(d) / d * radial_moment(kernel, d + 1);
}

SigmaEta sigma_eta(const Kernel& kernel, int d) {
  require_arg(d >= 1, "sigma_eta: d must be >= 1");
  const double R = kernel.support_radius();
  const double surf = unit_sphere_area(d);
  switch (kernel.kind()) {
    case Kernel::Kind::indicator:
      return {kernel.scale() * surf / d * std::pow(R, d + 2) / (d + 2), d, SigmaEta::Method::closed_form};
    case Kernel::Kind::truncated_linear:
      return {kernel.scale() * surf / d * std::pow(R, d + 3) / ((d + 2.0) * (d + 3.0)), d,
              SigmaEta::Method::closed_form};
    case Kernel::Kind::smooth_bump:
      return {sigma_eta_quadrature(kernel, d), d, SigmaEta::Method::quadrature};
  }
  return {};
}

double kernel_mass(const Kernel& kernel, int d) { return unit_sphere_area(d) * radial_moment(kernel, d - 1); }

}  // namespace pbg
