#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "pbigraph/error.hpp"
#include "pbigraph/nonlocal.hpp"

using namespace pbg;

namespace {

const BoxDomain kUnit = BoxDomain::unit(2);

std::vector<double> weights(const NonlocalOperator& op) {
  std::vector<double> w(op.rho());
  for (auto& x : w) x *= op.grid().cell_volume();
  return w;
}

double weighted_dot(const std::vector<double>& w, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

}  // namespace

TEST(Nonlocal, ConfigChecks) {
  const auto rho = Density::uniform(kUnit);
  EXPECT_CODE(NonlocalConfig::make(Kernel::indicator(1.0), 0.6, rho), ErrorCode::invalid_argument);
  EXPECT_CODE(NonlocalConfig::make(Kernel::indicator(1.0), 0.0, rho), ErrorCode::invalid_argument);
  const auto cfg = NonlocalConfig::make(Kernel::indicator(1.0), 0.05, rho);
  EXPECT_NEAR(cfg.sigma.value, std::numbers::pi / 4, 1e-12);
  EXPECT_CODE(NonlocalOperator(GridSpec(kUnit, {32, 32}), cfg), ErrorCode::resolution);
}

TEST(Nonlocal, ConstantsGiveZero) {
  const auto cfg = NonlocalConfig::make(Kernel::truncated_linear(2.0), 0.1, Density::cosine(kUnit, 0.4));
  const NonlocalOperator op(GridSpec(kUnit, {64, 64}), cfg);
  const std::vector<double> c(op.grid().size(), 3.0);
  for (double v : op.apply(c)) EXPECT_EQ(v, 0.0);
}

TEST(Nonlocal, QuadraticApproachesSecondMoment) {
  const auto cfg = NonlocalConfig::make(Kernel::indicator(1.0), 0.1, Density::uniform(kUnit));
  const GridSpec grid(kUnit, {512, 512});
  const auto u = GridFunction::sample(grid, [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; });
  const auto lu = nonlocal_laplacian(u, cfg);
  const int mid[2] = {256, 256};
  EXPECT_NEAR(lu.values[grid.ravel(mid)] / (std::numbers::pi / 2), 1.0, 0.01);
}

TEST(Nonlocal, LinearVanishesInInterior) {
  const auto cfg = NonlocalConfig::make(Kernel::indicator(1.0), 0.1, Density::uniform(kUnit));
  const GridSpec grid(kUnit, {128, 128});
  const auto u = GridFunction::sample(grid, [](std::span<const double> x) { return 2.0 * x[0] - 0.5 * x[1] + 1.0; });
  const auto lu = nonlocal_laplacian(u, cfg);
  std::vector<double> x(2);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.center(i, x);
    if (kUnit.distance_to_boundary(x) > 0.11) {
      EXPECT_LE(std::abs(lu.values[i]), grid.spacing(0) / 0.01) << i;
    }
  }
}

TEST(Nonlocal, SelfAdjointLinearAndMassFree) {
  const auto cfg = NonlocalConfig::make(Kernel::smooth_bump(1.0), 0.15, Density::cosine(kUnit, 0.3));
  const NonlocalOperator op(GridSpec(kUnit, {64, 64}), cfg);
  const auto w = weights(op);
  const auto n = op.grid().size();
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto u = test::random_vector(n, seed), v = test::random_vector(n, seed + 10);
    const auto lu = op.apply(u), lv = op.apply(v);
    const double a = weighted_dot(w, lu, v), b = weighted_dot(w, u, lv);
    EXPECT_LE(std::abs(a - b), 1e-10 * std::sqrt(weighted_dot(w, lu, lu) * weighted_dot(w, v, v)));

    std::vector<double> combo(n);
    for (std::size_t i = 0; i < n; ++i) combo[i] = 2.0 * u[i] - 3.0 * v[i];
    const auto lc = op.apply(combo);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(lc[i], 2.0 * lu[i] - 3.0 * lv[i], 1e-9 * (1 + std::abs(lc[i])));

    const std::vector<double> one(n, 1.0);
    EXPECT_LE(std::abs(weighted_dot(w, lu, one)), 1e-12 * std::sqrt(weighted_dot(w, lu, lu)));
  }
}

TEST(Nonlocal, PoissonResidualDefinition) {
  const auto cfg = NonlocalConfig::make(Kernel::indicator(1.0), 0.2, Density::uniform(kUnit));
  const GridSpec grid(kUnit, {32, 32});
  const auto u = AnalyticFunction::cosine_product(kUnit, {1, 1}).on_grid(grid);
  auto h = nonlocal_laplacian(u, cfg);
  for (auto& x : h.values) x = -x;
  for (double r : nonlocal_poisson_residual(u, h, cfg).values) EXPECT_EQ(r, 0.0);
  const GridFunction c(grid, std::vector<double>(grid.size(), 1.0)), zero(grid);
  for (double r : nonlocal_poisson_residual(c, zero, cfg).values) EXPECT_EQ(r, 0.0);
}

TEST(Nonlocal, RichardsonResidualMonotone) {
  const auto cfg = NonlocalConfig::make(Kernel::indicator(1.0), 0.1, Density::cosine(kUnit, 0.3));
  const NonlocalOperator op(GridSpec(kUnit, {64, 64}), cfg);
  // h with zero rho-weighted mean.
  auto h = AnalyticFunction::sine(kUnit, 1, 2).on_grid(op.grid()).values;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) num += h[i] * op.rho()[i], den += op.rho()[i];
  for (auto& x : h) x -= num / den;
  const auto res = nonlocal_richardson(op, h, 200);
  ASSERT_EQ(res.residual_norms.size(), 201u);
  for (std::size_t k = 1; k < res.residual_norms.size(); ++k)
    EXPECT_LE(res.residual_norms[k], res.residual_norms[k - 1] * (1 + 1e-12)) << k;
  EXPECT_LT(res.residual_norms.back(), 0.5 * res.residual_norms.front());
}

TEST(Nonlocal, PoincareRatio) {
  const auto cfg = NonlocalConfig::make(Kernel::indicator(1.0), 0.1, Density::uniform(kUnit));
  const GridSpec grid(kUnit, {64, 64});
  const GridFunction c(grid, std::vector<double>(grid.size(), 2.0));
  EXPECT_CODE(nonlocal_poincare_ratio(c, cfg, 2.0), ErrorCode::degenerate_input);
  const double r = nonlocal_poincare_ratio(AnalyticFunction::sine(kUnit).on_grid(grid), cfg, 2.0);
  EXPECT_TRUE(std::isfinite(r));
  EXPECT_GT(r, 0.0);
}

TEST(Consistency, RejectsNonNeumannPreset) {
  const auto cfg = NonlocalConfig::make(Kernel::indicator(1.0), 0.1, Density::uniform(kUnit));
  EXPECT_CODE(consistency_error(AnalyticFunction::affine(kUnit, {1.0, 0.0}), cfg, GridSpec(kUnit, {64, 64}), 0.2),
              ErrorCode::invalid_argument);
}

TEST(Consistency, InteriorErrorShrinksWithEpsilon) {
  const auto phi = AnalyticFunction::cosine_product(kUnit, {1, 1});
  const GridSpec grid(kUnit, {160, 160});
  double prev = INFINITY;
  for (double eps : {0.2, 0.1}) {
    const auto cfg = NonlocalConfig::make(Kernel::indicator(1.0), eps, Density::uniform(kUnit));
    const auto e = consistency_error(phi, cfg, grid, 0.4);
    EXPECT_LT(e.sup_interior, prev);
    EXPECT_LE(e.sup_interior, e.sup_global);
    EXPECT_LT(e.interior_count, e.count);
    prev = e.sup_interior;
  }
}

TEST(GraphConsistency, ConstantIsExact) {
  const auto c = test::uniform_cloud(2000, 3);
  const auto rho = Density::uniform(kUnit);
  const auto phi = AnalyticFunction::constant(kUnit, 1.5);
  const auto e = graph_consistency_error(c, Kernel::indicator(1.0), 0.1, phi, rho, std::numbers::pi / 4, 0.2);
  EXPECT_EQ(e.sup_interior, 0.0);
  EXPECT_EQ(e.sup_global, 0.0);
}

TEST(GraphConsistency, MatrixFreeMatchesAssembledGraph) {
  const auto c = test::uniform_cloud(3000, 4);
  const auto rho = Density::uniform(kUnit);
  const auto phi = AnalyticFunction::cosine_product(kUnit, {1, 1});
  const auto k = Kernel::truncated_linear(2.0);
  const double sigma = sigma_eta(k, 2).value;
  const auto a = graph_consistency_error(assemble_graph(c, k, 0.08), phi, rho, sigma, 0.2);
  const auto b = graph_consistency_error(c, k, 0.08, phi, rho, sigma, 0.2);
  EXPECT_NEAR(a.sup_interior, b.sup_interior, 1e-10 * a.sup_interior);
  EXPECT_NEAR(a.sup_global, b.sup_global, 1e-10 * a.sup_global);
  EXPECT_EQ(a.interior_count, b.interior_count);
}
