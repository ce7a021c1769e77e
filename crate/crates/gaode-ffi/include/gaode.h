/* C interface to the gaode adaptive-DE laboratory. */

#ifndef GAODE_H
#define GAODE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum {
  GAODE_STATUS_OK = 0,
  GAODE_STATUS_NULL_POINTER = 1,
  GAODE_STATUS_INVALID_ARGUMENT = 2,
  GAODE_STATUS_INVALID_UTF8 = 3,
  /**
   * The requested value does not exist, e.g. SP1 without successes or
   * evaluations-to-target for a failed run.
   */
  GAODE_STATUS_UNDEFINED = 4,
  GAODE_STATUS_INDEX_OUT_OF_RANGE = 5,
  GAODE_STATUS_IO_ERROR = 6,
  GAODE_STATUS_PANIC = 7,
} GaodeStatus;

/**
 * A resolved experiment configuration.
 */
typedef struct GaodeExperiment GaodeExperiment;

/**
 * The ordered run records of one executed experiment.
 */
typedef struct GaodeResults GaodeResults;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gaode_version(void);

/**
 * Message for the most recent non-OK status on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *gaode_last_error(void);

/**
 * Parse a TOML config document (same format the CLI accepts) and resolve
 * it into an experiment handle. On success the handle is written to `out`
 * and must be released with `gaode_experiment_free`.
 *
 * # Safety
 * `toml_text` must be a valid NUL-terminated string and `out` a valid
 * pointer.
 */
GaodeStatus gaode_experiment_from_toml(const char *toml_text, GaodeExperiment **out);

/**
 * Release an experiment handle. Null is a no-op.
 *
 * # Safety
 * `exp` must be a pointer previously returned by this library.
 */
void gaode_experiment_free(GaodeExperiment *exp);

/**
 * Execute every run of the experiment. On success the results handle is
 * written to `out` and must be released with `gaode_results_free`.
 *
 * # Safety
 * `exp` must be a live experiment handle and `out` a valid pointer.
 */
GaodeStatus gaode_experiment_run(const GaodeExperiment *exp, GaodeResults **out);

/**
 * Release a results handle. Null is a no-op.
 *
 * # Safety
 * `results` must be a pointer previously returned by this library.
 */
void gaode_results_free(GaodeResults *results);

/**
 * Number of runs in the results.
 *
 * # Safety
 * `results` must be a live results handle.
 */
size_t gaode_results_run_count(const GaodeResults *results);

/**
 * Number of successful runs.
 *
 * # Safety
 * `results` must be a live results handle.
 */
size_t gaode_results_success_count(const GaodeResults *results);

/**
 * SP1 over the runs; `GAODE_STATUS_UNDEFINED` when no run succeeded.
 *
 * # Safety
 * `results` must be a live results handle and `out` a valid pointer.
 */
GaodeStatus gaode_results_sp1(const GaodeResults *results, double *out);

/**
 * Whether run `index` reached the target error.
 *
 * # Safety
 * `results` must be a live results handle and `out` a valid pointer.
 */
GaodeStatus gaode_results_run_success(const GaodeResults *results, size_t index, bool *out);

/**
 * Counted evaluations at which run `index` reached the target;
 * `GAODE_STATUS_UNDEFINED` for failed runs.
 *
 * # Safety
 * `results` must be a live results handle and `out` a valid pointer.
 */
GaodeStatus gaode_results_run_fevals_to_success(const GaodeResults *results,
                                                size_t index,
                                                uint64_t *out);

/**
 * Total counted evaluations spent by run `index`.
 *
 * # Safety
 * `results` must be a live results handle and `out` a valid pointer.
 */
GaodeStatus gaode_results_run_counted_fevals(const GaodeResults *results,
                                             size_t index,
                                             uint64_t *out);

/**
 * Uncounted oracle evaluations spent by run `index` (zero for adaptive
 * methods).
 *
 * # Safety
 * `results` must be a live results handle and `out` a valid pointer.
 */
GaodeStatus gaode_results_run_oracle_evals(const GaodeResults *results,
                                           size_t index,
                                           uint64_t *out);

/**
 * Best error reached by run `index` by the end of its budget.
 *
 * # Safety
 * `results` must be a live results handle and `out` a valid pointer.
 */
GaodeStatus gaode_results_run_final_error(const GaodeResults *results, size_t index, double *out);

/**
 * Write the standard artifact set (`runs.csv`, `summary.csv`, heatmap and
 * ECDF tables and plots, `meta.txt`) into `dir`.
 *
 * # Safety
 * `exp` and `results` must be live handles; `dir` must be a valid
 * NUL-terminated path.
 */
GaodeStatus gaode_results_write_outputs(const GaodeExperiment *exp,
                                        const GaodeResults *results,
                                        const char *dir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAODE_H */
