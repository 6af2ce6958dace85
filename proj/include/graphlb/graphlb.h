#ifndef GRAPHLB_GRAPHLB_H
#define GRAPHLB_GRAPHLB_H

#include <stddef.h>
#include <stdint.h>

#if defined(GRAPHLB_BUILDING_LIBRARY)
#define GRAPHLB_API __attribute__((visibility("default")))
#else
#define GRAPHLB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum graphlb_status {
  GRAPHLB_OK = 0,
  GRAPHLB_INVALID_ARGUMENT = 1,
  GRAPHLB_PARSE_ERROR = 2,
  GRAPHLB_IO_ERROR = 3,
  GRAPHLB_BUDGET_EXCEEDED = 4,
  GRAPHLB_INTERNAL_ERROR = 5
} graphlb_status;

/* Opaque handles. Each has a matching *_free. */
typedef struct graphlb_graph graphlb_graph;
typedef struct graphlb_trace graphlb_trace;
typedef struct graphlb_coupled graphlb_coupled;

#define GRAPHLB_INFINITE_BUFFER UINT32_MAX

GRAPHLB_API const char* graphlb_version(void);

/* Message for the most recent failure on the calling thread; "" if none. */
GRAPHLB_API const char* graphlb_last_error(void);

/* Frees strings returned through char** out-parameters. */
GRAPHLB_API void graphlb_string_free(char* s);

/* ---- graphs ---------------------------------------------------------- */

typedef struct graphlb_graph_params {
  const char* family;   /* clique, ring, toric_grid, erdos_renyi, erased_regular,
                           rgg_torus, complete_bipartite, isolated */
  uint64_t n;
  double p;             /* erdos_renyi; < 0 means derive from avg_degree */
  uint64_t d;           /* erased_regular */
  double radius;        /* rgg_torus; < 0 means derive from avg_degree */
  double avg_degree;    /* target mean degree for erdos_renyi / rgg_torus */
  double c;             /* complete_bipartite part fraction */
  uint64_t width;       /* toric_grid; 0 with height 0 means a square of n */
  uint64_t height;
  uint64_t seed;
} graphlb_graph_params;

/* Fills every optional field with its "unset" value. */
GRAPHLB_API void graphlb_graph_params_init(graphlb_graph_params* params);

GRAPHLB_API graphlb_status graphlb_graph_generate(const graphlb_graph_params* params,
                                                  graphlb_graph** out);
GRAPHLB_API graphlb_status graphlb_graph_parse(const char* text, graphlb_graph** out);
GRAPHLB_API graphlb_status graphlb_graph_load(const char* path, graphlb_graph** out);
GRAPHLB_API graphlb_status graphlb_graph_save(const graphlb_graph* g, const char* path);
GRAPHLB_API graphlb_status graphlb_graph_to_text(const graphlb_graph* g, char** out);
GRAPHLB_API void graphlb_graph_free(graphlb_graph* g);

GRAPHLB_API graphlb_status graphlb_graph_vertex_count(const graphlb_graph* g, uint64_t* out);
GRAPHLB_API graphlb_status graphlb_graph_edge_count(const graphlb_graph* g, uint64_t* out);
GRAPHLB_API graphlb_status graphlb_graph_degree(const graphlb_graph* g, uint32_t v, uint64_t* out);
GRAPHLB_API graphlb_status graphlb_graph_min_degree(const graphlb_graph* g, uint64_t* out);
GRAPHLB_API graphlb_status graphlb_graph_fingerprint(const graphlb_graph* g, uint64_t* out);
/* Copies up to `capacity` sorted neighbor ids; *count receives the degree. */
GRAPHLB_API graphlb_status graphlb_graph_neighbors(const graphlb_graph* g, uint32_t v,
                                                   uint32_t* buffer, size_t capacity,
                                                   size_t* count);

/* ---- connectivity ---------------------------------------------------- */

GRAPHLB_API graphlb_status graphlb_com(const graphlb_graph* g, const uint32_t* set, size_t size,
                                       uint64_t* out);

typedef struct graphlb_dis_options {
  double epsilon;
  const char* scale;    /* "fluid" or "diffusion" */
  const char* mode;     /* "exact", "heuristic" or "auto" */
  uint64_t effort;      /* random subsets for the heuristic */
  uint64_t seed;
  uint64_t budget;      /* exact enumeration limit; 0 means the default */
} graphlb_dis_options;

typedef struct graphlb_dis_result {
  uint64_t value;
  int lower_bound;      /* nonzero when value is only a lower bound */
  uint64_t threshold_size;
} graphlb_dis_result;

/* `report` (optional) receives "key: value" lines including the witness. */
GRAPHLB_API graphlb_status graphlb_dis(const graphlb_graph* g, const graphlb_dis_options* options,
                                       graphlb_dis_result* out, char** report);

GRAPHLB_API graphlb_status graphlb_audit(const graphlb_graph* g, const double* epsilons,
                                         size_t count, uint64_t effort, uint64_t seed,
                                         uint64_t budget, char** report);

/* ---- simulation ------------------------------------------------------ */

typedef struct graphlb_sim_params {
  double lambda;
  uint32_t buffer;            /* GRAPHLB_INFINITE_BUFFER for b = inf */
  double horizon;
  double grid;
  uint64_t seed;
  const char* policy;         /* graph_jsq, cjsq_n, isolated */
  uint64_t cjsq_n;
  const uint32_t* initial;    /* per-server queue lengths, or NULL for empty */
  size_t initial_count;
  const uint32_t* group;      /* optional tracked subset */
  size_t group_count;
  int record_waits;
} graphlb_sim_params;

GRAPHLB_API void graphlb_sim_params_init(graphlb_sim_params* params);

GRAPHLB_API graphlb_status graphlb_simulate(const graphlb_graph* g, const graphlb_sim_params* params,
                                            graphlb_trace** out);
/* Reads the t and q columns of a trace CSV for a system of n servers. */
GRAPHLB_API graphlb_status graphlb_trace_load_csv(const char* path, uint64_t n,
                                                  graphlb_trace** out);
GRAPHLB_API void graphlb_trace_free(graphlb_trace* t);

GRAPHLB_API graphlb_status graphlb_trace_samples(const graphlb_trace* t, size_t* out);
GRAPHLB_API graphlb_status graphlb_trace_time(const graphlb_trace* t, size_t sample, double* out);
/* Fraction of servers with at least `level` tasks at a sample. */
GRAPHLB_API graphlb_status graphlb_trace_q(const graphlb_trace* t, size_t sample, size_t level,
                                           double* out);
GRAPHLB_API graphlb_status graphlb_trace_to_csv(const graphlb_trace* t, char** out);
GRAPHLB_API graphlb_status graphlb_trace_write_csv(const graphlb_trace* t, const char* path);

typedef struct graphlb_stationary {
  size_t levels;              /* entries written to mean_q / se_q */
  double wait_little;
  double wait_little_se;
  int has_fcfs;
  double wait_fcfs;
  double wait_fcfs_se;
} graphlb_stationary;

/* Batch-means summary over [warmup, horizon]; batches = 0 means 20.
   mean_q and se_q (optional) receive up to `capacity` levels. */
GRAPHLB_API graphlb_status graphlb_trace_stationary(const graphlb_trace* t, double warmup,
                                                    size_t batches, double* mean_q, double* se_q,
                                                    size_t capacity, graphlb_stationary* out);

/* ---- coupling -------------------------------------------------------- */

GRAPHLB_API graphlb_status graphlb_simulate_coupled(const graphlb_graph* g,
                                                    const graphlb_sim_params* params, uint64_t n,
                                                    const char* tie_rule, graphlb_coupled** out);
GRAPHLB_API void graphlb_coupled_free(graphlb_coupled* c);
GRAPHLB_API graphlb_status graphlb_coupled_summary(const graphlb_coupled* c, uint64_t* final_delta,
                                                   int64_t* max_bound_gap);
GRAPHLB_API graphlb_status graphlb_coupled_to_csv(const graphlb_coupled* c, char** out);
GRAPHLB_API graphlb_status graphlb_coupled_write_csv(const graphlb_coupled* c, const char* path);

/* ---- fluid and diffusion scaling ------------------------------------- */

/* Writes the drift for q = (q_1..q_k) into out[0..k). */
GRAPHLB_API graphlb_status graphlb_fluid_rhs(const double* q, size_t k, double lambda, double* out);
/* Integrates from q0 (length k) to the horizon; the endpoint goes to out. */
GRAPHLB_API graphlb_status graphlb_fluid_endpoint(const double* q0, size_t k, double lambda,
                                                  double horizon, double dt, double* out);
/* Trajectory from the empty state; levels = 0 picks the default truncation. */
GRAPHLB_API graphlb_status graphlb_fluid_csv(double lambda, double horizon, double dt,
                                             double sample_every, size_t levels, char** out);
GRAPHLB_API graphlb_status graphlb_scale_csv(const graphlb_trace* t, uint64_t n,
                                             double lambda_total, size_t levels, char** out);
GRAPHLB_API graphlb_status graphlb_suboptimality_threshold(double c, double* out);
/* Time at which part A saturates in the bipartite fluid model. */
GRAPHLB_API graphlb_status graphlb_bipartite_stop_time(double lambda, double c, double horizon,
                                                       double dt, int* stopped, double* out);

/* ---- experiments ----------------------------------------------------- */

/* Runs the suite described by a config file. Failing checks are not an
   error: their count goes to *failed_checks. */
GRAPHLB_API graphlb_status graphlb_run_experiments(const char* config_path, const char* profile,
                                                   const char* out_dir, uint64_t* failed_checks,
                                                   char** summary);

#ifdef __cplusplus
}
#endif

#endif
