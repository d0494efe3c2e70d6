#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "helpers.hpp"
#include "pbigraph/error.hpp"
#include "pbigraph/solver.hpp"

using namespace pbg;

namespace {

double wnorm_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / a.size());
}

double wnorm(std::span<const double> a) {
  const std::vector<double> zero(a.size(), 0.0);
  return wnorm_diff(a, zero);
}

WeightedGraph graph(std::size_t n, std::uint64_t seed, double eps) {
  return assemble_graph(test::uniform_cloud(static_cast<long long>(n), seed), Kernel::indicator(1.0), eps);
}

}  // namespace

TEST(SolveConfig, Validation) {
  SolveConfig c;
  c.p = 3.0;
  c.method = SolveMethod::cg_p2;
  EXPECT_CODE(c.validate(), ErrorCode::invalid_argument);
  c = SolveConfig{};
  c.tol = 0.0;
  EXPECT_CODE(c.validate(), ErrorCode::invalid_argument);
  EXPECT_EQ(parse_solve_method("gradient-bb"), SolveMethod::gradient_bb);
  EXPECT_CODE(parse_solve_method("newton"), ErrorCode::config);
}

TEST(SmoothedPower, LimitsAndDerivative) {
  EXPECT_DOUBLE_EQ(smoothed_power(-2.0, 3.0, 0.0), 8.0 / 3.0);
  EXPECT_EQ(smoothed_power(0.0, 1.5, 1e-3), 0.0);
  for (double s : {-0.7, 0.01, 1.3}) {
    const double h = 1e-6;
    const double fd = (smoothed_power(s + h, 1.5, 0.1) - smoothed_power(s - h, 1.5, 0.1)) / (2 * h);
    EXPECT_NEAR(smoothed_power_derivative(s, 1.5, 0.1), fd, 1e-8);
  }
}

TEST(Minimize, ConstantDataNeedsNoWork) {
  const auto g = graph(200, 1, 0.2);
  const std::vector<double> f(200, 0.4);
  for (double p : {1.5, 2.0, 3.0}) {
    SolveConfig cfg;
    cfg.p = p;
    const auto r = solve_graph_p_biharmonic(g, f, cfg);
    EXPECT_EQ(r.u, f) << p;
    EXPECT_LE(r.report.iterations, 1);
    EXPECT_EQ(r.report.status, SolveStatus::converged);
  }
}

TEST(Minimize, SinglePointGraph) {
  const auto g = assemble_graph(PointCloud::from_positions(BoxDomain::unit(2), {0.3, 0.3}), Kernel::indicator(1.0), 0.1);
  const std::vector<double> f{2.5};
  for (double p : {1.5, 2.0, 3.0}) {
    SolveConfig cfg;
    cfg.p = p;
    EXPECT_EQ(solve_graph_p_biharmonic(g, f, cfg).u, f);
  }
}

TEST(Minimize, DescentMatchesConjugateGradients) {
  const auto g = graph(500, 2, 0.15);
  const auto f = test::random_vector(500, 3);
  SolveConfig cfg;
  cfg.method = SolveMethod::gradient_bb;
  cfg.tol = 1e-10;
  cfg.max_iter = 200000;
  const auto bb = solve_graph_p_biharmonic(g, f, cfg);
  ASSERT_EQ(bb.report.status, SolveStatus::converged);
  const auto cg = cg_solve_p2(graph_operator(g), f, 1.0, 1e-13);
  EXPECT_LE(wnorm_diff(bb.u, cg.u) / wnorm(cg.u), 1e-6);
}

TEST(ConjugateGradients, MatchesDenseSolve) {
  const std::size_t n = 200;
  const auto g = graph(n, 4, 0.2);
  const auto f = test::random_vector(n, 5);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (auto j : g.row(i)) {
      L(i, j) += g.weight(i, j) * g.laplacian_scale();
      L(i, i) -= g.weight(i, j) * g.laplacian_scale();
    }
  const double lambda = 0.8;
  const Eigen::MatrixXd A = L * L + lambda * Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd ref = A.ldlt().solve(lambda * Eigen::Map<const Eigen::VectorXd>(f.data(), n));
  const auto cg = cg_solve_p2(graph_operator(g), f, lambda, 1e-14);
  const Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(cg.u.data(), n);
  EXPECT_LE((u - ref).norm() / ref.norm(), 1e-8);
}

TEST(ConjugateGradients, KernelDataConvergesImmediately) {
  const auto g = graph(300, 6, 0.25);
  const std::vector<double> f(300, -1.5);
  const auto r = cg_solve_p2(graph_operator(g), f, 1.0);
  EXPECT_EQ(r.u, f);
  EXPECT_LE(r.report.iterations, 2);
  EXPECT_EQ(r.report.status, SolveStatus::converged);
}

TEST(ConjugateGradients, ZeroOperator) {
  auto L = self_adjoint_operator(
      4, [](std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); },
      std::vector<double>(4, 0.25));
  const std::vector<double> f{1, 2, 3, 4};
  EXPECT_EQ(cg_solve_p2(L, f, 2.0).u, f);
}

TEST(Minimize, EnergyTraceMonotone) {
  const auto g = graph(300, 7, 0.15);
  const auto f = test::random_vector(300, 8);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    SolveConfig cfg;
    cfg.p = p;
    cfg.method = SolveMethod::gradient_bb;
    cfg.tol = 1e-7;
    const auto r = solve_graph_p_biharmonic(g, f, cfg);
    const auto& tr = r.report.energy_trace;
    for (std::size_t k = 1; k < tr.size(); ++k) ASSERT_LE(tr[k], tr[k - 1] + 1e-12) << "p=" << p << " k=" << k;
  }
}

TEST(Minimize, FirstOrderOptimalityAndAprioriBound) {
  const std::size_t n = 400;
  const auto g = graph(n, 9, 0.15);
  const auto f = test::random_vector(n, 10);
  for (double p : {2.0, 3.0}) {
    SolveConfig cfg;
    cfg.p = p;
    cfg.tol = 1e-8;
    const auto r = solve_graph_p_biharmonic(g, f, cfg);
    ASSERT_EQ(r.report.status, SolveStatus::converged);
    const auto res = p_biharmonic_residual(g, r.u, f, p, cfg.lambda);
    EXPECT_LE(test::sup_norm(res), n * cfg.tol * (1.0 + test::sup_norm(f))) << p;
    const auto lu = graph_laplacian(g, r.u);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lhs += std::pow(std::abs(lu[i]), p) / n + cfg.lambda / (2.0 * n) * r.u[i] * r.u[i];
      rhs += cfg.lambda / (2.0 * n) * f[i] * f[i];
    }
    EXPECT_LE(lhs, rhs + 1e-8) << p;
  }
}

TEST(Minimize, HypergraphRouteMatchesUnitGraph) {
  const auto c = test::uniform_cloud(300, 11);
  const double eps = 0.12;
  const auto h = build_hypergraph(c, eps);
  const auto g = assemble_unit_graph(c, eps);
  ASSERT_TRUE(h.dropped().empty());
  const auto f = test::random_vector(300, 12);
  for (double p : {2.0, 3.0}) {
    SolveConfig cfg;
    cfg.p = p;
    cfg.tol = p == 2.0 ? 1e-14 : 1e-12;
    cfg.max_iter = 500000;
    const auto a = solve_hypergraph_p_laplacian(h, eps, f, cfg), b = solve_graph_p_biharmonic(g, f, cfg);
    EXPECT_LE(test::sup_diff(a.u, b.u), 1e-10) << p;
  }
}

TEST(Minimize, SmoothingContinuationIsStable) {
  const std::size_t n = 200;
  const auto g = graph(n, 13, 0.2);
  const auto f = test::random_vector(n, 14);
  const double p = 1.5, lambda = 1.0;
  auto solve = [&](double tau) {
    SolveConfig cfg;
    cfg.p = p;
    cfg.tau = tau;
    cfg.continuation_steps = 0;
    cfg.tol = 1e-9;
    cfg.max_iter = 200000;
    return solve_graph_p_biharmonic(g, f, cfg).u;
  };
  const double tau = 1e-2;
  const auto a = solve(tau), b = solve(tau / 2);
  // |E_tau - E_{tau/2}| <= tau^p / p everywhere and E is lambda-strongly convex
  // in the 1/n-weighted norm, so the minimizers differ by at most 2 sqrt(tau^p/(p lambda)).
  EXPECT_LE(wnorm_diff(a, b), 5.0 * 2.0 * std::sqrt(std::pow(tau, p) / (p * lambda)));
}

TEST(QuadraticEnergy, GradientMatchesFiniteDifferences) {
  // Rectangular operator with distinct weights on both sides.
  const auto c = test::uniform_cloud(120, 15);
  const auto h = build_hypergraph(c, 0.2);
  const auto L = hypergraph_operator(h, 0.3);
  const auto u = test::random_vector(c.size(), 16), f = test::random_vector(c.size(), 17);
  for (double p : {1.5, 2.0, 3.0}) {
    const auto grad = quadratic_p_gradient(L, u, f, p, 0.9, p < 2 ? 1e-3 : 0.0);
    std::vector<double> up(u);
    double worst = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double s = 1e-6;
      up[i] = u[i] + s;
      const double ep = quadratic_p_energy(L, up, f, p, 0.9, p < 2 ? 1e-3 : 0.0);
      up[i] = u[i] - s;
      const double em = quadratic_p_energy(L, up, f, p, 0.9, p < 2 ? 1e-3 : 0.0);
      up[i] = u[i];
      // Domain weights are 1/n, so the Euclidean gradient is grad / n.
      worst = std::max(worst, std::abs((ep - em) / (2 * s) - grad[i] / u.size()));
    }
    EXPECT_LE(worst / (test::sup_norm(grad) / u.size()), 1e-5) << p;
  }
}

TEST(ProbeAdjointness, CatchesAsymmetry) {
  const auto g = graph(200, 18, 0.2);
  EXPECT_LE(probe_adjointness(graph_operator(g)), 1e-12);
  const auto bad = g.with_perturbed_entry(0, 0, 50.0);
  EXPECT_CODE(probe_adjointness(graph_operator(bad)), ErrorCode::self_adjointness);
  SolveConfig cfg;
  EXPECT_CODE(solve_graph_p_biharmonic(bad, test::random_vector(200, 1), cfg), ErrorCode::self_adjointness);
}

TEST(SolveReport, JsonFields) {
  const auto g = graph(100, 19, 0.3);
  SolveConfig cfg;
  cfg.p = 3.0;
  const auto r = solve_graph_p_biharmonic(g, test::random_vector(100, 2), cfg);
  const auto js = r.report.to_json();
  for (const char* key : {"\"iterations\"", "\"final_grad_norm\"", "\"status\"", "\"energy_trace\""})
    EXPECT_NE(js.find(key), std::string::npos) << key;
  EXPECT_EQ(r.report.to_json(false).find("energy_trace"), std::string::npos);
}
