#include "pbigraph/solver.hpp"

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>

#include "pbigraph/error.hpp"
#include "pbigraph/parallel.hpp"

namespace pbg {

namespace {

double wnorm(std::span<const double> v, std::span<const double> w) { return std::sqrt(weighted_dot(v, v, w)); }

}  // namespace

void LinearOperator::apply_adjoint(std::span<const double> v, std::span<double> out) const {
  if (adjoint) {
    adjoint(v, out);
  } else {
    apply(v, out);
  }
}

LinearOperator self_adjoint_operator(std::size_t n, LinearOperator::Apply apply, std::vector<double> weights) {
  LinearOperator L;
  L.rows = L.cols = n;
  L.apply = std::move(apply);
  L.domain_weights = weights;
  L.range_weights = std::move(weights);
  return L;
}

std::string to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::automatic: return "auto";
    case SolveMethod::gradient_bb: return "gradient-bb";
    case SolveMethod::cg_p2: return "cg-p2";
  }
  return "unknown";
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::stalled: return "stalled";
  }
  return "unknown";
}

SolveMethod parse_solve_method(const std::string& name) {
  if (name == "auto") return SolveMethod::automatic;
  if (name == "gradient-bb") return SolveMethod::gradient_bb;
  if (name == "cg-p2") return SolveMethod::cg_p2;
  fail(ErrorCode::config, "unknown solver method '" + name + "'");
}

void SolveConfig::validate() const {
  require_arg(p > 1.0 && std::isfinite(p), "solver: p must be > 1");
  require_arg(lambda >= 0.0, "solver: lambda must be >= 0");
  require_arg(tol > 0.0, "solver: tol must be > 0");
  require_arg(max_iter >= 0, "solver: max_iter must be >= 0");
  require_arg(tau >= 0.0, "solver: tau must be >= 0");
  require_arg(continuation_steps >= 0, "solver: continuation_steps must be >= 0");
  require_arg(method != SolveMethod::cg_p2 || p == 2.0, "solver: cg-p2 requires p = 2");
}

std::string SolveReport::to_json(bool include_trace) const {
  nlohmann::json j;
  j["iterations"] = iterations;
  j["final_grad_norm"] = final_grad_norm;
  j["status"] = to_string(status);
  j["method"] = to_string(method);
  j["final_tau"] = final_tau;
  j["stage_iterations"] = stage_iterations;
  if (include_trace) j["energy_trace"] = energy_trace;
  return j.dump();
}

double smoothed_power(double s, double p, double tau) {
  if (tau == 0.0) return std::pow(std::abs(s), p) / p;
  return (std::pow(s * s + tau * tau, 0.5 * p) - std::pow(tau, p)) / p;
}

double smoothed_power_derivative(double s, double p, double tau) {
  if (tau == 0.0) return signed_power(s, p);
  return s * std::pow(s * s + tau * tau, 0.5 * p - 1.0);
}

namespace {

// p * (phi_tau(a + b) - phi_tau(a)) without cancellation.
double power_increment(double a, double b, double p, double tau) {
  const double A = a * a + tau * tau;
  const double dA = b * (2.0 * a + b);
  if (p == 2.0) return dA;
  if (A == 0.0) return std::pow(std::abs(b), p);
  const double t = dA / A;
  if (t <= -1.0) return -std::pow(A, 0.5 * p);
  return std::pow(A, 0.5 * p) * std::expm1(0.5 * p * std::log1p(t));
}

struct Problem {
  const LinearOperator& L;
  std::span<const double> f;
  double p, lambda;
  std::span<const double> wd, wr;

  double energy(std::span<const double> s, std::span<const double> u, double tau) const {
    std::vector<double> a(s.size()), b(u.size());
    for (std::size_t i = 0; i < s.size(); ++i) a[i] = smoothed_power(s[i], p, tau) * (wr.empty() ? 1.0 : wr[i]);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double e = u[i] - f[i];
      b[i] = e * e * (wd.empty() ? 1.0 : wd[i]);
    }
    return pairwise_sum(a) + 0.5 * lambda * pairwise_sum(b);
  }

  void gradient(std::span<const double> s, std::span<const double> u, double tau, std::span<double> g) const {
    std::vector<double> q(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) q[i] = smoothed_power_derivative(s[i], p, tau);
    L.apply_adjoint(q, g);
    for (std::size_t i = 0; i < u.size(); ++i) g[i] += lambda * (u[i] - f[i]);
  }

  // E(u + alpha d) - E(u), given s = Lu and sd = Ld.
  double increment(std::span<const double> s, std::span<const double> sd, std::span<const double> u,
                   std::span<const double> d, double alpha, double tau) const {
    std::vector<double> a(s.size()), b(u.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      a[i] = power_increment(s[i], alpha * sd[i], p, tau) * (wr.empty() ? 1.0 : wr[i]);
    for (std::size_t i = 0; i < u.size(); ++i)
      b[i] = alpha * d[i] * (2.0 * (u[i] - f[i]) + alpha * d[i]) * (wd.empty() ? 1.0 : wd[i]);
    return pairwise_sum(a) / p + 0.5 * lambda * pairwise_sum(b);
  }
};

void check_shapes(const LinearOperator& L, std::span<const double> f) {
  require_arg(static_cast<bool>(L.apply), "solver: operator has no apply");
  require_length(f.size(), L.cols, "solver data");
  if (!L.domain_weights.empty()) require_length(L.domain_weights.size(), L.cols, "solver domain weights");
  if (!L.range_weights.empty()) require_length(L.range_weights.size(), L.rows, "solver range weights");
  if (!L.adjoint) {
    require_arg(L.rows == L.cols && L.domain_weights == L.range_weights,
                "solver: operator without adjoint must be square with matching weights");
  }
}

}  // namespace

double quadratic_p_energy(const LinearOperator& L, std::span<const double> u, std::span<const double> f, double p,
                          double lambda, double tau) {
  check_shapes(L, f);
  require_length(u.size(), L.cols, "energy input");
  std::vector<double> s(L.rows);
  L.apply(u, s);
  Problem P{L, f, p, lambda, L.domain_weights, L.range_weights};
  return P.energy(s, u, tau);
}

std::vector<double> quadratic_p_gradient(const LinearOperator& L, std::span<const double> u,
                                         std::span<const double> f, double p, double lambda, double tau) {
  check_shapes(L, f);
  require_length(u.size(), L.cols, "gradient input");
  std::vector<double> s(L.rows), g(L.cols);
  L.apply(u, s);
  Problem P{L, f, p, lambda, L.domain_weights, L.range_weights};
  P.gradient(s, u, tau, g);
  return g;
}

double probe_adjointness(const LinearOperator& L, double tol, int probes, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> u(L.cols), v(L.rows), Lu(L.rows), Ltv(L.cols);
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    for (double& x : u) x = unif(rng);
    for (double& x : v) x = unif(rng);
    L.apply(u, Lu);
    L.apply_adjoint(v, Ltv);
    const double lhs = weighted_dot(Lu, v, L.range_weights);
    const double rhs = weighted_dot(u, Ltv, L.domain_weights);
    const double scale = std::max(wnorm(Lu, L.range_weights) * wnorm(v, L.range_weights),
                                  wnorm(u, L.domain_weights) * wnorm(Ltv, L.domain_weights));
    const double rel = scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
    worst = std::max(worst, rel);
  }
  require(worst <= tol, ErrorCode::self_adjointness,
          "operator fails the adjointness probe (relative defect " + std::to_string(worst) + ")");
  return worst;
}

SolveResult cg_solve_p2(const LinearOperator& L, std::span<const double> f, double lambda, double tol, int max_iter) {
  check_shapes(L, f);
  require_arg(lambda > 0.0, "cg_solve_p2: lambda must be > 0");
  require_arg(tol > 0.0, "cg_solve_p2: tol must be > 0");
  const auto& w = L.domain_weights;
  const std::size_t n = L.cols;
  std::vector<double> s(L.rows);
  auto A = [&](std::span<const double> x, std::span<double> out) {
    L.apply(x, s);
    L.apply_adjoint(s, out);
    for (std::size_t i = 0; i < n; ++i) out[i] += lambda * x[i];
  };

  SolveResult res;
  res.report.method = SolveMethod::cg_p2;
  res.u.assign(f.begin(), f.end());
  std::vector<double> b(n), r(n), q(n), Aq(n), t(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = lambda * f[i];
  A(res.u, t);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - t[i];
  q = r;
  const double bnorm = wnorm(b, w);
  const double ff = 0.5 * lambda * weighted_dot(f, f, w);
  auto energy = [&] {
    for (std::size_t i = 0; i < n; ++i) t[i] = b[i] + r[i];
    return -0.5 * weighted_dot(t, res.u, w) + ff;
  };
  double rr = weighted_dot(r, r, w);
  res.report.energy_trace.push_back(energy());
  res.report.status = SolveStatus::max_iter;
  int it = 0;
  for (;; ++it) {
    if (std::sqrt(rr) <= tol * bnorm || rr == 0.0) {
      res.report.status = SolveStatus::converged;
      break;
    }
    if (it >= max_iter) break;
    A(q, Aq);
    const double qAq = weighted_dot(q, Aq, w);
    if (!(qAq > 0.0)) {
      res.report.status = SolveStatus::stalled;
      break;
    }
    const double alpha = rr / qAq;
    for (std::size_t i = 0; i < n; ++i) {
      res.u[i] += alpha * q[i];
      r[i] -= alpha * Aq[i];
    }
    const double rr_new = weighted_dot(r, r, w);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) q[i] = r[i] + beta * q[i];
    res.report.energy_trace.push_back(energy());
  }
  // Report the true residual, not the recursively updated one.
  A(res.u, t);
  for (std::size_t i = 0; i < n; ++i) t[i] = b[i] - t[i];
  res.report.iterations = it;
  res.report.final_grad_norm = wnorm(t, w);
  res.report.stage_iterations = {it};
  return res;
}

SolveResult minimize(const LinearOperator& L, std::span<const double> f, const SolveConfig& cfg) {
  cfg.validate();
  check_shapes(L, f);
  SolveMethod method = cfg.method;
  if (method == SolveMethod::automatic) method = cfg.p == 2.0 ? SolveMethod::cg_p2 : SolveMethod::gradient_bb;
  if (cfg.probe) probe_adjointness(L);
  const auto& wd = L.domain_weights;
  const std::size_t n = L.cols;

  if (method == SolveMethod::cg_p2) {
    require_arg(cfg.lambda > 0.0, "cg-p2 requires lambda > 0");
    std::vector<double> b(f.begin(), f.end());
    for (double& x : b) x *= cfg.lambda;
    const double bnorm = wnorm(b, wd);
    const double rel = bnorm > 0.0 ? cfg.tol / bnorm : 1.0;
    return cg_solve_p2(L, f, cfg.lambda, rel, cfg.max_iter);
  }

  std::vector<double> taus;
  if (cfg.p < 2.0 && cfg.tau > 0.0) {
    for (int k = 0; k <= cfg.continuation_steps; ++k) taus.push_back(std::ldexp(cfg.tau, -k));
  } else {
    taus.push_back(0.0);
  }

  Problem P{L, f, cfg.p, cfg.lambda, L.domain_weights, L.range_weights};
  SolveResult res;
  res.report.method = SolveMethod::gradient_bb;
  res.u.assign(f.begin(), f.end());
  auto& u = res.u;
  std::vector<double> s(L.rows), sd(L.rows), g(n), g_new(n), d(n);
  L.apply(u, s);

  constexpr double armijo = 1e-4;
  constexpr int max_backtracks = 80;
  int total = 0;
  bool stopped = false;
  SolveStatus status = SolveStatus::max_iter;
  double gn = 0.0;

  for (std::size_t stage = 0; stage < taus.size() && !stopped; ++stage) {
    const double tau = taus[stage];
    res.report.energy_trace.clear();
    double E = P.energy(s, u, tau);
    res.report.energy_trace.push_back(E);
    P.gradient(s, u, tau, g);
    gn = wnorm(g, wd);
    double alpha = gn > 0.0 ? 1.0 / std::max(1.0, gn) : 1.0;
    int stage_it = 0;
    status = SolveStatus::max_iter;
    for (;;) {
      if (gn <= cfg.tol) {
        status = SolveStatus::converged;
        break;
      }
      if (total >= cfg.max_iter) {
        stopped = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      L.apply(d, sd);
      const double slope = gn * gn;
      bool accepted = false;
      double dE = 0.0;
      for (int k = 0; k < max_backtracks; ++k) {
        dE = P.increment(s, sd, u, d, alpha, tau);
        if (std::isfinite(dE) && dE <= -armijo * alpha * slope) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        status = SolveStatus::stalled;
        stopped = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) u[i] += alpha * d[i];
      for (std::size_t i = 0; i < L.rows; ++i) s[i] += alpha * sd[i];
      ++total;
      ++stage_it;
      if (stage_it % 64 == 0) {
        // Refresh Lu so the incremental update does not drift.
        L.apply(u, s);
        E = P.energy(s, u, tau);
      } else {
        E += dE;
      }
      res.report.energy_trace.push_back(E);
      P.gradient(s, u, tau, g_new);
      // BB1 step in the domain metric: <s,s>/<s,y> with s = alpha d, y = g_new - g.
      std::vector<double>& y = g;
      for (std::size_t i = 0; i < n; ++i) y[i] = g_new[i] - g[i];
      const double sy = alpha * weighted_dot(d, y, wd);
      const double ss = alpha * alpha * weighted_dot(d, d, wd);
      std::swap(g, g_new);
      gn = wnorm(g, wd);
      const double next = sy > 0.0 ? ss / sy : 2.0 * alpha;
      alpha = std::isfinite(next) && next > 0.0 ? next : 1.0 / std::max(1.0, gn);
    }
    res.report.stage_iterations.push_back(stage_it);
    res.report.final_tau = tau;
  }
  res.report.iterations = total;
  res.report.final_grad_norm = gn;
  res.report.status = status;
  return res;
}

LinearOperator graph_operator(const WeightedGraph& g) {
  const std::size_t n = g.n();
  return self_adjoint_operator(
      n, [&g](std::span<const double> u, std::span<double> out) { graph_laplacian(g, u, out); },
      std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

SolveResult solve_graph_p_biharmonic(const WeightedGraph& g, std::span<const double> f, const SolveConfig& cfg) {
  require_arg(cfg.lambda > 0.0, "solve_graph_p_biharmonic: lambda must be > 0");
  return minimize(graph_operator(g), f, cfg);
}

LinearOperator hypergraph_operator(const OrientedHypergraph& h, double scale) {
  require_arg(scale > 0.0, "hypergraph_operator: scale must be > 0");
  LinearOperator L;
  L.rows = h.arc_count();
  L.cols = h.n();
  L.apply = [&h, scale](std::span<const double> u, std::span<double> out) {
    const auto g = hyper_gradient(h, u);
    for (std::size_t a = 0; a < g.size(); ++a) out[a] = scale * g[a];
  };
  L.adjoint = [&h, scale](std::span<const double> v, std::span<double> out) {
    const auto f = hyper_adjoint(h, v);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = scale * f[i];
  };
  const double w = 1.0 / static_cast<double>(h.n());
  L.domain_weights.assign(h.n(), w);
  L.range_weights.assign(h.arc_count(), w);
  return L;
}

SolveResult solve_hypergraph_p_laplacian(const OrientedHypergraph& h, double eps, std::span<const double> f,
                                         const SolveConfig& cfg) {
  require_arg(cfg.lambda > 0.0, "solve_hypergraph_p_laplacian: lambda must be > 0");
  require_arg(eps > 0.0, "solve_hypergraph_p_laplacian: eps must be > 0");
  const double scale = 1.0 / (static_cast<double>(h.n()) * eps * eps);
  auto L = hypergraph_operator(h, scale);
  SolveConfig c = cfg;
  if (c.method == SolveMethod::automatic) c.method = c.p == 2.0 ? SolveMethod::cg_p2 : SolveMethod::gradient_bb;
  return minimize(L, f, c);
}

}  // namespace pbg
