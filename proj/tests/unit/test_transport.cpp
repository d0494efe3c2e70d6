#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "pbigraph/error.hpp"
#include "pbigraph/analytic.hpp"
#include "pbigraph/transport.hpp"

using namespace pbg;

namespace {

const BoxDomain kUnit = BoxDomain::unit(2);

}  // namespace

TEST(Voronoi, SinglePoint) {
  const auto c = PointCloud::from_positions(kUnit, {0.2, 0.7});
  const auto m = voronoi_map(c, GridSpec(kUnit, {16, 16}));
  for (auto a : m.assignment) EXPECT_EQ(a, 0u);
}

TEST(Voronoi, MatchesBruteForce) {
  const auto c = test::uniform_cloud(2000, 3);
  const GridSpec grid(kUnit, {128, 128});
  const auto m = voronoi_map(c, grid);
  std::vector<double> x(2);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.center(k, x);
    std::uint32_t best = 0;
    double bd = squared_distance(x, c.point(0));
    for (std::uint32_t j = 1; j < c.size(); ++j) {
      const double d = squared_distance(x, c.point(j));
      if (d < bd) bd = d, best = j;
    }
    ASSERT_EQ(m.assignment[k], best) << k;
    ASSERT_NEAR(m.displacement[k], std::sqrt(bd), 1e-15);
  }
}

TEST(Voronoi, RelabelingInvariant) {
  const auto c = test::uniform_cloud(500, 4);
  std::vector<double> rev;
  for (std::size_t i = c.size(); i-- > 0;) rev.insert(rev.end(), c.point(i).begin(), c.point(i).end());
  const auto r = PointCloud::from_positions(kUnit, rev);
  const GridSpec grid(kUnit, {64, 64});
  const auto a = voronoi_map(c, grid), b = voronoi_map(r, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) EXPECT_EQ(a.displacement[k], b.displacement[k]);
}

TEST(Voronoi, DisplacementScalesWithDeltaN) {
  const long long n = 16000;
  const auto dn = DeltaN::make(n, 2);
  EXPECT_NEAR(dn.value, std::sqrt(std::log(16000.0) / 16000.0), 1e-15);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto m = voronoi_map(test::uniform_cloud(n, seed), GridSpec(kUnit, {128, 128}));
    const double ratio = m.sup_displacement() / dn.value;
    EXPECT_GE(ratio, 0.2) << seed;
    EXPECT_LE(ratio, 3.0) << seed;
  }
}

TEST(DeltaN, DecreasingInN) {
  for (long long n = 3; n < 2000; n += 97) EXPECT_GT(DeltaN::make(n, 2).value, DeltaN::make(n + 1, 2).value);
  EXPECT_CODE(DeltaN::make(1, 2), ErrorCode::invalid_argument);
}

TEST(LpError, ZeroForExactPullback) {
  const auto c = test::uniform_cloud(300, 5);
  const GridSpec grid(kUnit, {32, 32});
  const auto m = voronoi_map(c, grid);
  // u_ref piecewise constant on Voronoi cells, u_n its sample values.
  std::vector<double> un(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) un[i] = std::sin(3.0 * c.point(i)[0]);
  GridFunction ref(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) ref.values[k] = un[m.assignment[k]];
  EXPECT_EQ(lp_error(un, m, ref, 2.0, Density::cosine(kUnit, 0.3)), 0.0);
}

TEST(LpError, ConstantOffset) {
  const auto c = test::uniform_cloud(100, 6);
  const GridSpec grid(kUnit, {40, 40});
  const auto m = voronoi_map(c, grid);
  const std::vector<double> un(c.size(), 1.0);
  const GridFunction ref(grid, std::vector<double>(grid.size(), 1.25));
  for (double p : {1.0, 2.0, 3.0}) EXPECT_NEAR(lp_error(un, m, ref, p, Density::uniform(kUnit)), 0.25, 1e-12);
  // Normalized density on the grid integrates to 1 up to midpoint error.
  EXPECT_NEAR(lp_error(un, m, ref, 2.0, Density::cosine(kUnit, 0.5)), 0.25, 1e-3);
}

TEST(TLp, DominatesBothTerms) {
  const auto c = test::uniform_cloud(400, 7);
  const GridSpec grid(kUnit, {48, 48});
  const auto m = voronoi_map(c, grid);
  const auto un = test::random_vector(c.size(), 8);
  const auto ref = AnalyticFunction::cosine_product(kUnit, {1, 1}).on_grid(grid);
  const auto rho = Density::uniform(kUnit);
  for (double p : {1.0, 2.0, 3.0}) {
    const double t = tlp_distance(un, m, ref, p, rho);
    EXPECT_GE(t, lp_error(un, m, ref, p, rho));
    const std::vector<double> zero(c.size(), 0.0);
    const GridFunction zref(grid);
    EXPECT_GE(t, tlp_distance(zero, m, zref, p, rho));
  }
}

TEST(TLp, SinglePointQuadrature) {
  const double a = 0.3, b = 0.8;
  const auto c = PointCloud::from_positions(kUnit, {a, b});
  const GridSpec grid(kUnit, {256, 256});
  const auto m = voronoi_map(c, grid);
  const std::vector<double> un{0.0};
  const GridFunction ref(grid);
  // int |x - x1|^2 over the unit square, exactly.
  auto axis = [](double t) { return (std::pow(1 - t, 3) + std::pow(t, 3)) / 3.0; };
  const double exact2 = axis(a) + axis(b);
  EXPECT_NEAR(std::pow(tlp_distance(un, m, ref, 2.0, Density::uniform(kUnit)), 2.0), exact2, 1e-5);
  // p = 1 against a fine midpoint sum.
  const int fine = 2048;
  double exact1 = 0.0;
  for (int i = 0; i < fine; ++i)
    for (int j = 0; j < fine; ++j)
      exact1 += std::hypot((i + 0.5) / fine - a, (j + 0.5) / fine - b) / (double(fine) * fine);
  EXPECT_NEAR(tlp_distance(un, m, ref, 1.0, Density::uniform(kUnit)), exact1, 1e-5);
}
