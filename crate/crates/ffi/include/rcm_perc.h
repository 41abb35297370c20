#ifndef RCM_PERC_H
#define RCM_PERC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RcmStatus {
  RCM_STATUS_OK = 0,
  RCM_STATUS_NULL_POINTER = 1,
  RCM_STATUS_INVALID_PARAMETER = 2,
  RCM_STATUS_QUADRATURE_FAILED = 3,
  RCM_STATUS_INFINITE_BOUND = 4,
  RCM_STATUS_RAMP_EXHAUSTED = 5,
  RCM_STATUS_IO = 6,
  RCM_STATUS_PANIC = 7,
} RcmStatus;

/**
 * Opaque critical-intensity search result.
 */
typedef struct RcmEstimate RcmEstimate;

/**
 * Opaque connection model.
 */
typedef struct RcmModel RcmModel;

typedef struct RcmSimParams {
  uint32_t dim;
  double gamma;
  /**
   * Radius of the observation window.
   */
  double system_size;
  uint64_t max_generated_points;
  uint64_t max_steps;
} RcmSimParams;

typedef struct RcmSearchConfig {
  uint64_t runs;
  double ramp_factor;
  uint32_t refinements;
  uint32_t max_ramp_steps;
  bool early_exit;
} RcmSearchConfig;

typedef struct RcmClusterOutcome {
  bool escaped;
  uint64_t cluster_size;
  uint64_t generated_points;
  uint64_t steps;
  double max_norm;
  bool capped;
} RcmClusterOutcome;

typedef struct RcmVerdict {
  double gamma;
  uint64_t runs;
  uint64_t escapes;
  uint64_t contained;
  uint64_t capped_runs;
  bool percolates;
} RcmVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *rcm_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rcm_version(void);

/**
 * Parameters with default work caps.
 */
struct RcmSimParams rcm_sim_params_default(uint32_t dim, double gamma, double system_size);

struct RcmSearchConfig rcm_search_config_default(void);

/**
 * # Safety
 * `out` must be NULL or point to writable storage for one pointer.
 */
enum RcmStatus rcm_model_gilbert(double range, struct RcmModel **out);

/**
 * # Safety
 * As for [`rcm_model_gilbert`].
 */
enum RcmStatus rcm_model_penetrable(double range, double p, struct RcmModel **out);

/**
 * # Safety
 * As for [`rcm_model_gilbert`].
 */
enum RcmStatus rcm_model_soft_sphere(double range,
                                     double beta,
                                     uint32_t hardness,
                                     struct RcmModel **out);

/**
 * Piecewise-linear profile through `(radii[i], values[i])`.
 *
 * # Safety
 * `radii` and `values` must each point to `len` readable doubles.
 */
enum RcmStatus rcm_model_tabulated(const double *radii,
                                   const double *values,
                                   size_t len,
                                   struct RcmModel **out);

/**
 * # Safety
 * `model` must be NULL or a handle from an `rcm_model_*` constructor that
 * has not been freed.
 */
void rcm_model_free(struct RcmModel *model);

/**
 * Connection probability at distance `r`.
 *
 * # Safety
 * `model` must be a live handle; `out` writable.
 */
enum RcmStatus rcm_model_phi(const struct RcmModel *model, double r, double *out);

/**
 * `∫φ` over `R^dim`.
 *
 * # Safety
 * `model` must be a live handle; `out` writable.
 */
enum RcmStatus rcm_connectivity_mass(const struct RcmModel *model, uint32_t dim, double *out);

/**
 * Branching lower bound `1 / ∫φ` on the critical intensity.
 *
 * # Safety
 * `model` must be a live handle; `out` writable.
 */
enum RcmStatus rcm_branching_bound(const struct RcmModel *model, uint32_t dim, double *out);

/**
 * Explores the origin's cluster for trial `trial` of master seed `seed`.
 * Trial `k` here equals trial `k` of a verdict with the same seed.
 *
 * # Safety
 * `model` must be a live handle; `params` readable; `out` writable.
 */
enum RcmStatus rcm_explore(const struct RcmModel *model,
                           const struct RcmSimParams *params,
                           uint64_t seed,
                           uint64_t trial,
                           struct RcmClusterOutcome *out);

/**
 * Percolation verdict from `runs` independent explorations.
 *
 * # Safety
 * `model` must be a live handle; `params` readable; `out` writable.
 */
enum RcmStatus rcm_percolation_verdict(const struct RcmModel *model,
                                       const struct RcmSimParams *params,
                                       uint64_t runs,
                                       uint64_t seed,
                                       bool early_exit,
                                       struct RcmVerdict *out);

/**
 * Brackets the critical intensity. `params->gamma` is ignored.
 *
 * # Safety
 * `model` must be a live handle; `params` and `config` readable; `out`
 * writable. Free the result with [`rcm_estimate_free`].
 */
enum RcmStatus rcm_estimate_critical(const struct RcmModel *model,
                                     const struct RcmSimParams *params,
                                     const struct RcmSearchConfig *config,
                                     uint64_t seed,
                                     struct RcmEstimate **out);

/**
 * # Safety
 * `est` must be NULL or a live estimate handle.
 */
double rcm_estimate_lower(const struct RcmEstimate *est);

/**
 * # Safety
 * `est` must be NULL or a live estimate handle.
 */
double rcm_estimate_upper(const struct RcmEstimate *est);

/**
 * # Safety
 * `est` must be NULL or a live estimate handle.
 */
double rcm_estimate_midpoint(const struct RcmEstimate *est);

/**
 * True when some verdict hit a work cap.
 *
 * # Safety
 * `est` must be NULL or a live estimate handle.
 */
bool rcm_estimate_unreliable(const struct RcmEstimate *est);

/**
 * Number of verdicts the search evaluated.
 *
 * # Safety
 * `est` must be NULL or a live estimate handle.
 */
size_t rcm_estimate_evaluations(const struct RcmEstimate *est);

/**
 * Full result as JSON. Free with [`rcm_string_free`]; NULL on failure.
 *
 * # Safety
 * `est` must be NULL or a live estimate handle.
 */
char *rcm_estimate_to_json(const struct RcmEstimate *est);

/**
 * # Safety
 * `est` must be NULL or a handle from [`rcm_estimate_critical`] that has
 * not been freed.
 */
void rcm_estimate_free(struct RcmEstimate *est);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void rcm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RCM_PERC_H */
