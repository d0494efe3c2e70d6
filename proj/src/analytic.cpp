#include "pbigraph/analytic.hpp"

#include <cmath>
#include <numbers>

#include "pbigraph/error.hpp"

namespace pbg {

using std::numbers::pi;

AnalyticFunction AnalyticFunction::constant(const BoxDomain& domain, double c) {
  AnalyticFunction f(Kind::constant, domain);
  f.b_ = c;
  return f;
}

AnalyticFunction AnalyticFunction::cosine_product(const BoxDomain& domain, std::vector<int> wavenumbers,
                                                  double amplitude) {
  require_length(wavenumbers.size(), static_cast<std::size_t>(domain.dim()), "cosine wavenumbers");
  AnalyticFunction f(Kind::cosine_product, domain);
  f.a_.assign(wavenumbers.begin(), wavenumbers.end());
  f.b_ = amplitude;
  return f;
}

AnalyticFunction AnalyticFunction::affine(const BoxDomain& domain, std::vector<double> a, double b) {
  require_length(a.size(), static_cast<std::size_t>(domain.dim()), "affine slopes");
  AnalyticFunction f(Kind::affine, domain);
  f.a_ = std::move(a);
  f.b_ = b;
  return f;
}

AnalyticFunction AnalyticFunction::sine(const BoxDomain& domain, int axis, int wavenumber) {
  require_arg(axis >= 0 && axis < domain.dim(), "sine: axis out of range");
  AnalyticFunction f(Kind::sine, domain);
  f.axis_ = axis;
  f.a_ = {static_cast<double>(wavenumber)};
  return f;
}

AnalyticFunction AnalyticFunction::radial_quadratic(const BoxDomain& domain, std::vector<double> center) {
  require_length(center.size(), static_cast<std::size_t>(domain.dim()), "radial center");
  AnalyticFunction f(Kind::radial_quadratic, domain);
  f.a_ = std::move(center);
  return f;
}

AnalyticFunction AnalyticFunction::from_name(const std::string& name, const BoxDomain& domain) {
  const auto d = static_cast<std::size_t>(domain.dim());
  if (name == "constant") return constant(domain, 1.0);
  if (name == "cosine") return cosine_product(domain, std::vector<int>(d, 1));
  if (name == "affine") return affine(domain, std::vector<double>(d, 1.0));
  if (name == "sine") return sine(domain);
  if (name == "radial") {
    std::vector<double> c(d);
    for (std::size_t k = 0; k < d; ++k) c[k] = 0.5 * (domain.lo(k) + domain.hi(k));
    return radial_quadratic(domain, c);
  }
  fail(ErrorCode::invalid_argument, "unknown analytic preset '" + name + "'");
}

std::string AnalyticFunction::name() const {
  switch (kind_) {
    case Kind::constant: return "constant";
    case Kind::cosine_product: return "cosine";
    case Kind::affine: return "affine";
    case Kind::sine: return "sine";
    case Kind::radial_quadratic: return "radial";
  }
  return "unknown";
}

double AnalyticFunction::operator()(std::span<const double> x) const {
  const int d = domain_.dim();
  switch (kind_) {
    case Kind::constant: return b_;
    case Kind::cosine_product: {
      double v = b_;
      for (int k = 0; k < d; ++k) v *= std::cos(pi * a_[k] * (x[k] - domain_.lo(k)) / domain_.side(k));
      return v;
    }
    case Kind::affine: {
      double v = b_;
      for (int k = 0; k < d; ++k) v += a_[k] * x[k];
      return v;
    }
    case Kind::sine: return std::sin(pi * a_[0] * (x[axis_] - domain_.lo(axis_)) / domain_.side(axis_));
    case Kind::radial_quadratic: {
      double v = 0.0;
      for (int k = 0; k < d; ++k) v += (x[k] - a_[k]) * (x[k] - a_[k]);
      return v;
    }
  }
  return 0.0;
}

void AnalyticFunction::gradient(std::span<const double> x, std::span<double> g) const {
  const int d = domain_.dim();
  for (int k = 0; k < d; ++k) g[k] = 0.0;
  switch (kind_) {
    case Kind::constant: return;
    case Kind::cosine_product: {
      for (int k = 0; k < d; ++k) {
        double v = b_;
        for (int j = 0; j < d; ++j) {
          const double w = pi * a_[j] / domain_.side(j);
          const double t = w * (x[j] - domain_.lo(j));
          v *= j == k ? -w * std::sin(t) : std::cos(t);
        }
        g[k] = v;
      }
      return;
    }
    case Kind::affine:
      for (int k = 0; k < d; ++k) g[k] = a_[k];
      return;
    case Kind::sine: {
      const double w = pi * a_[0] / domain_.side(axis_);
      g[axis_] = w * std::cos(w * (x[axis_] - domain_.lo(axis_)));
      return;
    }
    case Kind::radial_quadratic:
      for (int k = 0; k < d; ++k) g[k] = 2.0 * (x[k] - a_[k]);
      return;
  }
}

double AnalyticFunction::cosine_eigenvalue() const {
  require_arg(kind_ == Kind::cosine_product, "cosine_eigenvalue: not a cosine product");
  double kappa = 0.0;
  for (int k = 0; k < domain_.dim(); ++k) {
    const double w = pi * a_[k] / domain_.side(k);
    kappa += w * w;
  }
  return kappa;
}

double AnalyticFunction::laplacian(std::span<const double> x) const {
  switch (kind_) {
    case Kind::constant:
    case Kind::affine: return 0.0;
    case Kind::cosine_product: return -cosine_eigenvalue() * (*this)(x);
    case Kind::sine: {
      const double w = pi * a_[0] / domain_.side(axis_);
      return -w * w * (*this)(x);
    }
    case Kind::radial_quadratic: return 2.0 * domain_.dim();
  }
  return 0.0;
}

double AnalyticFunction::weighted_laplacian(std::span<const double> x, const Density& rho, double sigma) const {
  require(rho.has_gradient(), ErrorCode::invalid_density,
          "weighted_laplacian: closed form needs a differentiable density");
  const int d = domain_.dim();
  std::vector<double> gu(d), gr(d);
  gradient(x, gu);
  rho.gradient(x, gr);
  double dot = 0.0;
  for (int k = 0; k < d; ++k) dot += gu[k] * gr[k];
  return sigma * (0.5 * rho(x) * laplacian(x) + dot);
}

GridFunction AnalyticFunction::on_grid(const GridSpec& g) const {
  return GridFunction::sample(g, [this](std::span<const double> x) { return (*this)(x); });
}

}  // namespace pbg
