/* C interface to the pbigraph library.
 *
 * Objects are opaque handles created by the build and sample functions and
 * released with the matching free function. Every fallible call returns a
 * pbg_status; on failure pbg_last_error() describes the problem (the message
 * is thread-local and valid until the next failing call on that thread).
 */
#ifndef PBIGRAPH_C_H
#define PBIGRAPH_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PBG_BUILDING_SHARED)
#    define PBG_API __declspec(dllexport)
#  else
#    define PBG_API __declspec(dllimport)
#  endif
#else
#  define PBG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pbg_status {
  PBG_OK = 0,
  PBG_ERR_INVALID_ARGUMENT = 1,
  PBG_ERR_LENGTH_MISMATCH = 2,
  PBG_ERR_DEGENERATE_INPUT = 3,
  PBG_ERR_RESOLUTION = 4,
  PBG_ERR_INVALID_DENSITY = 5,
  PBG_ERR_SELF_ADJOINTNESS = 6,
  PBG_ERR_IO = 7,
  PBG_ERR_CONFIG = 8,
  PBG_ERR_INTERNAL = 99
} pbg_status;

typedef enum pbg_solve_method { PBG_SOLVE_AUTO = 0, PBG_SOLVE_GRADIENT_BB = 1, PBG_SOLVE_CG_P2 = 2 } pbg_solve_method;

typedef enum pbg_solve_status { PBG_CONVERGED = 0, PBG_MAX_ITER = 1, PBG_STALLED = 2 } pbg_solve_status;

typedef struct pbg_cloud pbg_cloud;
typedef struct pbg_graph pbg_graph;
typedef struct pbg_hypergraph pbg_hypergraph;

typedef struct pbg_solve_options {
  double p;
  double lambda;
  double tol;
  int max_iter;
  int method; /* pbg_solve_method */
  double tau;
  int continuation_steps;
} pbg_solve_options;

typedef struct pbg_solve_info {
  int iterations;
  int status; /* pbg_solve_status */
  int method; /* method actually used */
  double final_grad_norm;
  double final_energy;
} pbg_solve_info;

PBG_API const char* pbg_version(void);
PBG_API const char* pbg_last_error(void);
PBG_API const char* pbg_status_string(pbg_status status);
/* Worker threads for parallel loops (default 1). */
PBG_API pbg_status pbg_set_threads(unsigned n);

/* --- point clouds ------------------------------------------------------ */

/* density: "uniform" or "cosine" (amplitude used only for "cosine"). */
PBG_API pbg_status pbg_cloud_sample(int dim, const double* lo, const double* hi, const char* density,
                                    double amplitude, long long n, uint64_t seed, pbg_cloud** out);
/* positions: n*dim row-major values inside [lo, hi]. */
PBG_API pbg_status pbg_cloud_from_positions(int dim, const double* lo, const double* hi, const double* positions,
                                            size_t n, pbg_cloud** out);
PBG_API size_t pbg_cloud_size(const pbg_cloud* cloud);
PBG_API int pbg_cloud_dim(const pbg_cloud* cloud);
PBG_API pbg_status pbg_cloud_positions(const pbg_cloud* cloud, double* out, size_t len);
PBG_API void pbg_cloud_free(pbg_cloud* cloud);

/* --- graphs ------------------------------------------------------------- */

/* kernel: "indicator" | "truncated-linear" | "smooth-bump"; radius <= 0 picks the default. */
PBG_API pbg_status pbg_graph_build(const pbg_cloud* cloud, const char* kernel, double radius, double eps,
                                   pbg_graph** out);
/* Unit weights W'_ij = 1 for |x_i - x_j| < eps. */
PBG_API pbg_status pbg_graph_build_unit(const pbg_cloud* cloud, double eps, pbg_graph** out);
PBG_API size_t pbg_graph_n(const pbg_graph* g);
PBG_API size_t pbg_graph_nnz(const pbg_graph* g);
/* out = (1/(n eps^2)) sum_j W_ij (u_j - u_i). */
PBG_API pbg_status pbg_graph_laplacian(const pbg_graph* g, const double* u, double* out, size_t n);
PBG_API pbg_status pbg_graph_energy(const pbg_graph* g, const double* u, const double* f, size_t n, double p,
                                    double lambda, double* energy);
/* r = -Lap(|Lap u|^{p-2} Lap u) + lambda (f - u). */
PBG_API pbg_status pbg_graph_residual(const pbg_graph* g, const double* u, const double* f, size_t n, double p,
                                      double lambda, double* out);
PBG_API void pbg_graph_free(pbg_graph* g);

/* --- hypergraphs ---------------------------------------------------------- */

PBG_API pbg_status pbg_hypergraph_build(const pbg_cloud* cloud, double eps, pbg_hypergraph** out);
PBG_API size_t pbg_hypergraph_arc_count(const pbg_hypergraph* h);
PBG_API size_t pbg_hypergraph_dropped_count(const pbg_hypergraph* h);
/* out = c div_H(|c grad_H f|^{p-2} c grad_H f), length n. */
PBG_API pbg_status pbg_hypergraph_p_laplacian(const pbg_hypergraph* h, const double* f, size_t n, double p,
                                              double scale, double* out);
PBG_API void pbg_hypergraph_free(pbg_hypergraph* h);

/* --- solvers ------------------------------------------------------------- */

PBG_API void pbg_solve_options_default(pbg_solve_options* opt);
/* Minimizes the graph p-biharmonic energy; u_out has length n. info may be NULL. */
PBG_API pbg_status pbg_solve_graph(const pbg_graph* g, const double* f, size_t n, const pbg_solve_options* opt,
                                   double* u_out, pbg_solve_info* info);
/* Same problem through the hypergraph gradient with scale 1/(n eps^2). */
PBG_API pbg_status pbg_solve_hypergraph(const pbg_hypergraph* h, double eps, const double* f, size_t n,
                                        const pbg_solve_options* opt, double* u_out, pbg_solve_info* info);

/* --- experiments --------------------------------------------------------- */

/* Runs an experiment from a TOML config. experiment (may be NULL) overrides
 * the config's experiment key, out_dir (may be NULL) its output_dir, and a
 * non-empty seed list its seeds; threads = 0 keeps the config value.
 * Returns PBG_ERR_CONFIG for invalid configs. *exit_code is 0 when every check
 * passed and 1 otherwise. */
PBG_API pbg_status pbg_experiment_run(const char* experiment, const char* config_path, const char* out_dir,
                                      const uint64_t* seeds, size_t seed_count, unsigned threads, int* exit_code);
/* One "PASS name: detail" / "FAIL name: detail" line per check of the last
 * experiment run on this thread. */
PBG_API const char* pbg_experiment_summary(void);

#ifdef __cplusplus
}
#endif

#endif
