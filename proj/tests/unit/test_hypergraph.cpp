#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "pbigraph/error.hpp"
#include "pbigraph/graph_ops.hpp"
#include "pbigraph/hypergraph.hpp"

using namespace pbg;

namespace {

// -L'(|L'f|^{p-2} L'f) with L' the unscaled unit-weight Laplacian, built from
// brute-force pairs so it shares no code with the hypergraph side.
std::vector<double> graph_side(const PointCloud& c, double eps, const std::vector<double>& f, double p) {
  const std::size_t n = c.size();
  std::vector<std::vector<std::size_t>> nb(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && squared_distance(c.point(i), c.point(j)) < eps * eps) nb[i].push_back(j);
  auto lap = [&](const std::vector<double>& v) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (auto j : nb[i]) out[i] += v[j] - v[i];
    return out;
  };
  auto t = lap(f);
  for (auto& x : t) x = x == 0.0 ? 0.0 : std::pow(std::abs(x), p - 2) * x;
  auto out = lap(t);
  for (auto& x : out) x = -x;
  return out;
}

OrientedHypergraph random_general(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Hyperarc> arcs;
  std::vector<std::uint32_t> ids(n);
  for (std::uint32_t i = 0; i < n; ++i) ids[i] = i;
  for (std::size_t a = 0; a < 2 * n; ++a) {
    std::shuffle(ids.begin(), ids.end(), rng);
    const std::size_t no = 1 + rng() % 3, ni = 1 + rng() % 6;
    arcs.push_back({{ids.begin(), ids.begin() + no}, {ids.begin() + no, ids.begin() + no + ni}});
  }
  return OrientedHypergraph::from_arcs(n, arcs);
}

}  // namespace

TEST(Hypergraph, HandExample) {
  const auto h = build_hypergraph(test::three_points(), 1.0);
  ASSERT_EQ(h.arc_count(), 2u);
  EXPECT_EQ(std::vector<std::uint32_t>(h.out(0).begin(), h.out(0).end()), std::vector<std::uint32_t>{0});
  EXPECT_EQ(std::vector<std::uint32_t>(h.in(0).begin(), h.in(0).end()), std::vector<std::uint32_t>{1});
  EXPECT_EQ(std::vector<std::uint32_t>(h.in(1).begin(), h.in(1).end()), std::vector<std::uint32_t>{0});
  EXPECT_EQ(h.dropped(), std::vector<std::uint32_t>{2});

  const std::vector<double> f{0, 3, 5}, G{1, 2};
  const auto grad = hyper_gradient(h, f);
  EXPECT_DOUBLE_EQ(grad[0], 3.0);
  EXPECT_DOUBLE_EQ(grad[1], -3.0);
  const auto adj = hyper_adjoint(h, G);
  EXPECT_EQ(adj, (std::vector<double>{1, -1, 0}));
  EXPECT_DOUBLE_EQ(test::dot(grad, G), -3.0);
  EXPECT_DOUBLE_EQ(test::dot(f, adj), -3.0);
  EXPECT_DOUBLE_EQ(hyper_p_laplacian(h, f, 2.0)[0], 6.0);
  const auto zero = hyper_adjoint(h, std::vector<double>{0, 0});
  EXPECT_EQ(zero, (std::vector<double>{0, 0, 0}));
}

TEST(Hypergraph, DumpFormat) {
  std::ostringstream os;
  build_hypergraph(test::three_points(), 1.0).dump(os);
  EXPECT_EQ(os.str(), "0 | 1\n1 | 0\n");
}

TEST(Hypergraph, LargeEpsilonConnectsEverything) {
  const auto c = test::uniform_cloud(40, 3);
  const auto h = build_hypergraph(c, 2.0);
  ASSERT_EQ(h.arc_count(), 40u);
  for (std::size_t a = 0; a < 40; ++a) EXPECT_EQ(h.in(a).size(), 39u);
}

TEST(Hypergraph, InSetsMatchBruteForce) {
  const auto c = test::uniform_cloud(2000, 5);
  const auto h = build_hypergraph(c, 0.1);
  std::size_t a = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::uint32_t> ref;
    for (std::size_t j = 0; j < c.size(); ++j)
      if (j != i && squared_distance(c.point(i), c.point(j)) < 0.01) ref.push_back(static_cast<std::uint32_t>(j));
    if (ref.empty()) continue;
    ASSERT_LT(a, h.arc_count());
    EXPECT_EQ(h.out(a)[0], i);
    EXPECT_EQ(std::vector<std::uint32_t>(h.in(a).begin(), h.in(a).end()), ref);
    ++a;
  }
  EXPECT_EQ(a, h.arc_count());
  EXPECT_EQ(a + h.dropped().size(), c.size());
}

TEST(Hypergraph, GradientIsUnscaledUnitLaplacian) {
  const auto c = test::uniform_cloud(500, 7);
  const double eps = 0.08;
  const auto h = build_hypergraph(c, eps);
  const auto g = assemble_unit_graph(c, eps);
  const auto f = test::random_vector(500, 8);
  const auto grad = hyper_gradient(h, f);
  const auto lap = graph_laplacian(g, f, LaplacianScaling::unscaled);
  for (std::size_t a = 0; a < h.arc_count(); ++a) EXPECT_NEAR(grad[a], lap[h.out(a)[0]], 1e-12 * (1 + std::abs(grad[a])));
  const std::vector<double> cst(500, 2.5);
  for (double v : hyper_gradient(h, cst)) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Hypergraph, AdjointnessOnGeneralArcs) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 30 + seed * 7;
    const auto h = random_general(n, seed);
    const auto f = test::random_vector(n, seed + 1000), G = test::random_vector(h.arc_count(), seed + 2000);
    const auto gf = hyper_gradient(h, f), gs = hyper_adjoint(h, G);
    const double a = test::dot(gf, G), b = test::dot(f, gs);
    EXPECT_LE(std::abs(a - b), 1e-12 * test::norm2(gf) * test::norm2(G)) << seed;
    const auto div = hyper_divergence(h, G);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(div[i], -gs[i]);
  }
}

TEST(Hypergraph, FromArcsValidates) {
  EXPECT_CODE(OrientedHypergraph::from_arcs(3, {{{0}, {}}}), ErrorCode::invalid_argument);
  EXPECT_CODE(OrientedHypergraph::from_arcs(3, {{{0, 1}, {1, 2}}}), ErrorCode::invalid_argument);
  EXPECT_CODE(OrientedHypergraph::from_arcs(3, {{{0}, {3}}}), ErrorCode::invalid_argument);
}

TEST(Hypergraph, PLaplacianIdentity) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto c = test::uniform_cloud(300, seed);
    const double eps = 0.1;
    const auto h = build_hypergraph(c, eps);
    const auto f = test::random_vector(300, seed + 50);
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
      const auto lhs = hyper_p_laplacian(h, f, p), rhs = graph_side(c, eps, f, p);
      EXPECT_LE(test::sup_diff(lhs, rhs), 1e-12 * test::sup_norm(rhs)) << "p=" << p;
    }
    // Rescaled operator carries c^{p-1} c = c^p.
    const double s = 1.0 / (300 * eps * eps);
    const auto scaled = hyper_p_laplacian(h, f, 3.0, s), plain = hyper_p_laplacian(h, f, 3.0);
    for (std::size_t i = 0; i < 300; ++i) EXPECT_NEAR(scaled[i], std::pow(s, 3.0) * plain[i], 1e-12 * std::abs(scaled[i]) + 1e-300);
  }
}

TEST(Hypergraph, PLaplacianOfConstantVanishes) {
  const auto h = build_hypergraph(test::uniform_cloud(200, 2), 0.15);
  const std::vector<double> c(200, 1.25);
  for (double v : hyper_p_laplacian(h, c, 3.0)) EXPECT_NEAR(v, 0.0, 1e-12);
  EXPECT_CODE(hyper_p_laplacian(h, c, 1.0), ErrorCode::invalid_argument);
  EXPECT_CODE(hyper_gradient(h, std::vector<double>(3)), ErrorCode::length_mismatch);
}
