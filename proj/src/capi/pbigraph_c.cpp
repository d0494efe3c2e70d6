#include "pbigraph_c.h"

#include <memory>
#include <new>
#include <string>

#include "pbigraph/error.hpp"
#include "pbigraph/experiments.hpp"
#include "pbigraph/geometry.hpp"
#include "pbigraph/graph_ops.hpp"
#include "pbigraph/hypergraph.hpp"
#include "pbigraph/parallel.hpp"
#include "pbigraph/solver.hpp"

struct pbg_cloud {
  pbg::PointCloud cloud;
};

struct pbg_graph {
  pbg::WeightedGraph graph;
};

struct pbg_hypergraph {
  pbg::OrientedHypergraph h;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_summary;

pbg_status set_error(pbg_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs f and converts exceptions to status codes.
template <class F>
pbg_status guarded(F&& f) {
  try {
    f();
    return PBG_OK;
  } catch (const pbg::Error& e) {
    return set_error(static_cast<pbg_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(PBG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(PBG_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(PBG_ERR_INTERNAL, "unknown error");
  }
}

void need(bool cond, const char* what) {
  if (!cond) pbg::fail(pbg::ErrorCode::invalid_argument, what);
}

pbg::BoxDomain box(int dim, const double* lo, const double* hi) {
  need(dim >= 1 && lo && hi, "domain: need dim >= 1 and lo/hi arrays");
  return pbg::BoxDomain(std::vector<double>(lo, lo + dim), std::vector<double>(hi, hi + dim));
}

pbg::SolveConfig to_config(const pbg_solve_options* opt) {
  pbg_solve_options o;
  pbg_solve_options_default(&o);
  if (opt) o = *opt;
  pbg::SolveConfig cfg;
  cfg.p = o.p;
  cfg.lambda = o.lambda;
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  need(o.method >= 0 && o.method <= 2, "solve options: unknown method");
  cfg.method = static_cast<pbg::SolveMethod>(o.method);
  cfg.tau = o.tau;
  cfg.continuation_steps = o.continuation_steps;
  return cfg;
}

void fill_info(const pbg::SolveReport& r, pbg_solve_info* info) {
  if (!info) return;
  info->iterations = r.iterations;
  info->status = static_cast<int>(r.status);
  info->method = static_cast<int>(r.method);
  info->final_grad_norm = r.final_grad_norm;
  info->final_energy = r.energy_trace.empty() ? 0.0 : r.energy_trace.back();
}

}  // namespace

extern "C" {

const char* pbg_version(void) { return "0.3.0"; }

const char* pbg_last_error(void) { return g_last_error.c_str(); }

const char* pbg_status_string(pbg_status s) {
  switch (s) {
    case PBG_OK: return "ok";
    case PBG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PBG_ERR_LENGTH_MISMATCH: return "length mismatch";
    case PBG_ERR_DEGENERATE_INPUT: return "degenerate input";
    case PBG_ERR_RESOLUTION: return "insufficient resolution";
    case PBG_ERR_INVALID_DENSITY: return "invalid density";
    case PBG_ERR_SELF_ADJOINTNESS: return "self-adjointness violated";
    case PBG_ERR_IO: return "i/o error";
    case PBG_ERR_CONFIG: return "invalid config";
    case PBG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

pbg_status pbg_set_threads(unsigned n) {
  return guarded([&] {
    need(n >= 1, "threads must be >= 1");
    pbg::set_thread_count(n);
  });
}

pbg_status pbg_cloud_sample(int dim, const double* lo, const double* hi, const char* density, double amplitude,
                            long long n, uint64_t seed, pbg_cloud** out) {
  return guarded([&] {
    need(out != nullptr, "out must not be NULL");
    *out = nullptr;
    const auto dom = box(dim, lo, hi);
    const std::string kind = density ? density : "uniform";
    pbg::exp::DensitySpec spec;
    spec.kind = kind;
    spec.amplitude = amplitude;
    *out = new pbg_cloud{pbg::sample_point_cloud(dom, spec.make(dom), n, seed)};
  });
}

pbg_status pbg_cloud_from_positions(int dim, const double* lo, const double* hi, const double* positions, size_t n,
                                    pbg_cloud** out) {
  return guarded([&] {
    need(out != nullptr, "out must not be NULL");
    *out = nullptr;
    need(positions != nullptr || n == 0, "positions must not be NULL");
    auto dom = box(dim, lo, hi);
    std::vector<double> pos(positions, positions + n * static_cast<size_t>(dim));
    *out = new pbg_cloud{pbg::PointCloud::from_positions(std::move(dom), std::move(pos))};
  });
}

size_t pbg_cloud_size(const pbg_cloud* c) { return c ? c->cloud.size() : 0; }

int pbg_cloud_dim(const pbg_cloud* c) { return c ? c->cloud.dim() : 0; }

pbg_status pbg_cloud_positions(const pbg_cloud* c, double* out, size_t len) {
  return guarded([&] {
    need(c && out, "cloud and out must not be NULL");
    pbg::require_length(len, c->cloud.positions.size(), "pbg_cloud_positions");
    std::copy(c->cloud.positions.begin(), c->cloud.positions.end(), out);
  });
}

void pbg_cloud_free(pbg_cloud* c) { delete c; }

pbg_status pbg_graph_build(const pbg_cloud* c, const char* kernel, double radius, double eps, pbg_graph** out) {
  return guarded([&] {
    need(out != nullptr, "out must not be NULL");
    *out = nullptr;
    need(c != nullptr, "cloud must not be NULL");
    const std::string name = kernel ? kernel : "indicator";
    if (radius <= 0.0) radius = name == "truncated-linear" ? 2.0 : 1.0;
    const auto k = pbg::Kernel::from_name(name, radius);
    *out = new pbg_graph{pbg::assemble_graph(c->cloud, k, eps)};
  });
}

pbg_status pbg_graph_build_unit(const pbg_cloud* c, double eps, pbg_graph** out) {
  return guarded([&] {
    need(out != nullptr, "out must not be NULL");
    *out = nullptr;
    need(c != nullptr, "cloud must not be NULL");
    *out = new pbg_graph{pbg::assemble_unit_graph(c->cloud, eps)};
  });
}

size_t pbg_graph_n(const pbg_graph* g) { return g ? g->graph.n() : 0; }

size_t pbg_graph_nnz(const pbg_graph* g) { return g ? g->graph.nnz() : 0; }

pbg_status pbg_graph_laplacian(const pbg_graph* g, const double* u, double* out, size_t n) {
  return guarded([&] {
    need(g && u && out, "arguments must not be NULL");
    pbg::graph_laplacian(g->graph, {u, n}, {out, n});
  });
}

pbg_status pbg_graph_energy(const pbg_graph* g, const double* u, const double* f, size_t n, double p, double lambda,
                            double* energy) {
  return guarded([&] {
    need(g && u && f && energy, "arguments must not be NULL");
    *energy = pbg::p_biharmonic_energy(g->graph, {u, n}, {f, n}, p, lambda);
  });
}

pbg_status pbg_graph_residual(const pbg_graph* g, const double* u, const double* f, size_t n, double p,
                              double lambda, double* out) {
  return guarded([&] {
    need(g && u && f && out, "arguments must not be NULL");
    const auto r = pbg::p_biharmonic_residual(g->graph, {u, n}, {f, n}, p, lambda);
    std::copy(r.begin(), r.end(), out);
  });
}

void pbg_graph_free(pbg_graph* g) { delete g; }

pbg_status pbg_hypergraph_build(const pbg_cloud* c, double eps, pbg_hypergraph** out) {
  return guarded([&] {
    need(out != nullptr, "out must not be NULL");
    *out = nullptr;
    need(c != nullptr, "cloud must not be NULL");
    *out = new pbg_hypergraph{pbg::build_hypergraph(c->cloud, eps)};
  });
}

size_t pbg_hypergraph_arc_count(const pbg_hypergraph* h) { return h ? h->h.arc_count() : 0; }

size_t pbg_hypergraph_dropped_count(const pbg_hypergraph* h) { return h ? h->h.dropped().size() : 0; }

pbg_status pbg_hypergraph_p_laplacian(const pbg_hypergraph* h, const double* f, size_t n, double p, double scale,
                                      double* out) {
  return guarded([&] {
    need(h && f && out, "arguments must not be NULL");
    const auto r = pbg::hyper_p_laplacian(h->h, {f, n}, p, scale);
    std::copy(r.begin(), r.end(), out);
  });
}

void pbg_hypergraph_free(pbg_hypergraph* h) { delete h; }

void pbg_solve_options_default(pbg_solve_options* opt) {
  if (!opt) return;
  const pbg::SolveConfig d;
  opt->p = d.p;
  opt->lambda = d.lambda;
  opt->tol = d.tol;
  opt->max_iter = d.max_iter;
  opt->method = static_cast<int>(d.method);
  opt->tau = d.tau;
  opt->continuation_steps = d.continuation_steps;
}

pbg_status pbg_solve_graph(const pbg_graph* g, const double* f, size_t n, const pbg_solve_options* opt,
                           double* u_out, pbg_solve_info* info) {
  return guarded([&] {
    need(g && f && u_out, "arguments must not be NULL");
    const auto res = pbg::solve_graph_p_biharmonic(g->graph, {f, n}, to_config(opt));
    std::copy(res.u.begin(), res.u.end(), u_out);
    fill_info(res.report, info);
  });
}

pbg_status pbg_solve_hypergraph(const pbg_hypergraph* h, double eps, const double* f, size_t n,
                                const pbg_solve_options* opt, double* u_out, pbg_solve_info* info) {
  return guarded([&] {
    need(h && f && u_out, "arguments must not be NULL");
    const auto res = pbg::solve_hypergraph_p_laplacian(h->h, eps, {f, n}, to_config(opt));
    std::copy(res.u.begin(), res.u.end(), u_out);
    fill_info(res.report, info);
  });
}

pbg_status pbg_experiment_run(const char* experiment, const char* config_path, const char* out_dir,
                              const uint64_t* seeds, size_t seed_count, unsigned threads, int* exit_code) {
  g_summary.clear();
  return guarded([&] {
    need(config_path && exit_code, "config path and exit_code must not be NULL");
    std::optional<pbg::exp::Experiment> which;
    if (experiment) which = pbg::exp::parse_experiment(experiment);
    auto cfg = pbg::exp::load_config(config_path, which);
    if (out_dir && *out_dir) cfg.output_dir = out_dir;
    if (seeds && seed_count) cfg.seeds.assign(seeds, seeds + seed_count);
    if (threads) cfg.threads = threads;
    cfg.validate();
    const auto outcome = pbg::exp::run_experiment(cfg);
    for (const auto& c : outcome.checks)
      g_summary += (c.pass ? "PASS " : "FAIL ") + c.name + ": " + c.detail + "\n";
    g_summary += "report: " + outcome.report_path + "\n";
    *exit_code = outcome.exit_code;
  });
}

const char* pbg_experiment_summary(void) { return g_summary.c_str(); }

}  // extern "C"
