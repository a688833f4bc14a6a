/* C interface to the mtlab core: opaque handles, status codes, UTF-8 JSON
 * strings. Every function returning mtlab_status leaves outputs untouched on
 * failure; mtlab_last_error() gives the detail message for the calling
 * thread. Strings returned through char** are heap blocks to be released
 * with mtlab_string_free. */

#ifndef MTLAB_MTLAB_H
#define MTLAB_MTLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MTLAB_API __declspec(dllexport)
#else
#define MTLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mtlab_status {
  MTLAB_OK = 0,
  MTLAB_ERR_INVALID_ARGUMENT = 1,
  MTLAB_ERR_NEGATIVE_WEIGHT = 2,
  MTLAB_ERR_UNEQUAL_MASS = 3,
  MTLAB_ERR_TOO_LARGE = 4,
  MTLAB_ERR_OUT_OF_RANGE = 5,
  MTLAB_ERR_BRANCH_BEFORE_ARRIVAL = 6,
  MTLAB_ERR_HORIZON_EXCEEDED = 7,
  MTLAB_ERR_INVALID_STEP = 8,
  MTLAB_ERR_NON_POSITIVE_SPEED = 9,
  MTLAB_ERR_DENOMINATOR_NONPOSITIVE = 10,
  MTLAB_ERR_CONFIG_INVALID = 11,
  MTLAB_ERR_ASSUMPTION_VIOLATED = 12,
  MTLAB_ERR_PARSE = 13,
  MTLAB_ERR_INTERNAL = 14
} mtlab_status;

typedef enum mtlab_metric_kind {
  MTLAB_METRIC_NORM = 0,
  MTLAB_METRIC_W1 = 1,
  MTLAB_METRIC_FLAT = 2,
  MTLAB_METRIC_MT = 3
} mtlab_metric_kind;

typedef struct mtlab_measure mtlab_measure;
typedef struct mtlab_grid mtlab_grid;
typedef struct mtlab_model mtlab_model;
typedef struct mtlab_trajectory mtlab_trajectory;

MTLAB_API const char* mtlab_version(void);
MTLAB_API const char* mtlab_status_name(mtlab_status status);
MTLAB_API const char* mtlab_last_error(void);
MTLAB_API void mtlab_string_free(char* s);

/* --- measures --------------------------------------------------------- */

MTLAB_API mtlab_status mtlab_measure_create(const double* positions, const double* weights,
                                            size_t count, mtlab_measure** out);
MTLAB_API mtlab_status mtlab_measure_from_json(const char* json, mtlab_measure** out);
MTLAB_API mtlab_status mtlab_measure_to_json(const mtlab_measure* m, char** out);
MTLAB_API size_t mtlab_measure_size(const mtlab_measure* m);
MTLAB_API mtlab_status mtlab_measure_atom(const mtlab_measure* m, size_t index, double* position,
                                          double* weight);
MTLAB_API double mtlab_measure_total_variation(const mtlab_measure* m);
MTLAB_API double mtlab_measure_mass_at(const mtlab_measure* m, double x);
MTLAB_API void mtlab_measure_free(mtlab_measure* m);

/* --- breakpoint grids -------------------------------------------------- */

MTLAB_API mtlab_status mtlab_grid_create(const double* points, size_t count, mtlab_grid** out);
MTLAB_API mtlab_status mtlab_grid_from_json(const char* json, mtlab_grid** out);
MTLAB_API size_t mtlab_grid_size(const mtlab_grid* g);
MTLAB_API double mtlab_grid_point(const mtlab_grid* g, size_t index);
MTLAB_API void mtlab_grid_free(mtlab_grid* g);

/* --- metrics ------------------------------------------------------------ */

/* grid may be NULL except for MTLAB_METRIC_MT. */
MTLAB_API mtlab_status mtlab_metric(mtlab_metric_kind kind, const mtlab_measure* m1,
                                    const mtlab_measure* m2, const mtlab_grid* grid, double* out);
MTLAB_API mtlab_status mtlab_metric_oracle(mtlab_metric_kind kind, const mtlab_measure* m1,
                                           const mtlab_measure* m2, const mtlab_grid* grid,
                                           double* out);

/* --- models ------------------------------------------------------------- */

MTLAB_API mtlab_status mtlab_model_from_json(const char* json, mtlab_model** out);
MTLAB_API mtlab_status mtlab_model_grid(const mtlab_model* m, mtlab_grid** out);
MTLAB_API size_t mtlab_model_measure_count(const mtlab_model* m);
MTLAB_API mtlab_status mtlab_model_measure_name(const mtlab_model* m, size_t index, char** out);
MTLAB_API mtlab_status mtlab_model_measure(const mtlab_model* m, const char* name,
                                           mtlab_measure** out);
/* Solver block; fields the file omits come back as their defaults
 * (dt = 0, horizon = 0, quad = 1, merge = 0). */
MTLAB_API mtlab_status mtlab_model_solver(const mtlab_model* m, double* dt, double* horizon,
                                          int* quad_particles, double* merge_tolerance);
MTLAB_API void mtlab_model_free(mtlab_model* m);

/* --- simulation ---------------------------------------------------------- */

MTLAB_API mtlab_status mtlab_simulate(const mtlab_model* model, const mtlab_measure* m0,
                                      double horizon, double dt, int quad_particles_per_step,
                                      double merge_tolerance, mtlab_trajectory** out);
MTLAB_API size_t mtlab_trajectory_steps(const mtlab_trajectory* t);
MTLAB_API double mtlab_trajectory_time(const mtlab_trajectory* t, size_t k);
MTLAB_API double mtlab_trajectory_v(const mtlab_trajectory* t, size_t k);
MTLAB_API double mtlab_trajectory_total_mass(const mtlab_trajectory* t, size_t k);
MTLAB_API size_t mtlab_trajectory_atom_count(const mtlab_trajectory* t, size_t k);
MTLAB_API mtlab_status mtlab_trajectory_snapshot(const mtlab_trajectory* t, size_t k,
                                                 mtlab_measure** out);
MTLAB_API void mtlab_trajectory_free(mtlab_trajectory* t);

/* --- stability constants -------------------------------------------------- */

typedef struct mtlab_constants {
  double t_max;
  double t_int;
  double t_intmin;
  double mass_step; /* +inf when Lip(g1) = 0 */
  long it1;
  long it2;
  double kappa;
  double alpha;
  double beta;
  int fixed_step;
  double min_g1;
  double sup_g1;
  double sup_c;
  double lip_g1;
  double lip_c;
} mtlab_constants;

MTLAB_API mtlab_status mtlab_stability_constants(const mtlab_model* model,
                                                 const mtlab_measure* mu1,
                                                 const mtlab_measure* mu2, mtlab_constants* out);
MTLAB_API mtlab_status mtlab_local_c1(const mtlab_model* model, const mtlab_measure* mu1,
                                      const mtlab_measure* mu2, double T, double* out);
/* exp(alpha * ceil(t/beta)) for the pair's constants. */
MTLAB_API mtlab_status mtlab_global_factor(const mtlab_model* model, const mtlab_measure* mu1,
                                           const mtlab_measure* mu2, double t, double* out);

/* --- closed-form reference pairs ------------------------------------------ */

typedef enum mtlab_example_id {
  MTLAB_EXAMPLE_DRIFT = 0,          /* frozen atom vs free atom        */
  MTLAB_EXAMPLE_OUTFLOW = 1,        /* decaying atom vs delayed atom   */
  MTLAB_EXAMPLE_SPEED_COUPLED = 2   /* two-atom speed-coupled pair     */
} mtlab_example_id;

typedef struct mtlab_example_params {
  double eps;
  double c1;            /* OUTFLOW only */
  double g_low;         /* SPEED_COUPLED only */
  double y;             /* SPEED_COUPLED only */
  int quadrature_atoms; /* OUTFLOW only */
} mtlab_example_params;

MTLAB_API mtlab_status mtlab_example_pair(mtlab_example_id id, double t,
                                          const mtlab_example_params* params,
                                          const mtlab_grid* grid, mtlab_measure** out1,
                                          mtlab_measure** out2);

/* --- reproduction checks --------------------------------------------------- */

MTLAB_API size_t mtlab_repro_count(void);
MTLAB_API mtlab_status mtlab_repro_name(size_t index, char** out);
/* Runs one named check; pass_out gets 0/1, detail_out the summary line. */
MTLAB_API mtlab_status mtlab_repro_run(const char* name, uint64_t seed, int workers,
                                       double metric_skew, int* pass_out, char** detail_out);

#ifdef __cplusplus
}
#endif

#endif /* MTLAB_MTLAB_H */
