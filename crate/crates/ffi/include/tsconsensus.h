#ifndef TSCONSENSUS_H
#define TSCONSENSUS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum TscStatus {
  TSC_STATUS_OK = 0,
  TSC_STATUS_NULL_POINTER = 1,
  TSC_STATUS_INVALID_UTF8 = 2,
  TSC_STATUS_PARSE_ERROR = 3,
  TSC_STATUS_INVALID_INPUT = 4,
  TSC_STATUS_NUMERICAL_ERROR = 5,
  TSC_STATUS_UNKNOWN_EXAMPLE = 6,
  TSC_STATUS_BUFFER_TOO_SMALL = 7,
  TSC_STATUS_PANIC = 8,
} TscStatus;

/**
 * Opaque scenario handle.
 */
typedef struct TscScenario TscScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a scenario from JSON text. On success `*out` owns a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TscStatus tsc_scenario_from_json(const char *json, struct TscScenario **out);

/**
 * Loads a built-in scenario by name (`ex5`, `steady_gain`, ...).
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TscStatus tsc_scenario_builtin(const char *name, struct TscScenario **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void tsc_scenario_free(struct TscScenario *s);

/**
 * Replaces the truncation horizon. The scenario is left unchanged on error.
 *
 * # Safety
 * `s` must be a valid handle.
 */
enum TscStatus tsc_scenario_set_horizon(struct TscScenario *s, double horizon);

/**
 * Segment decomposition of the windowed time scale as JSON.
 *
 * # Safety
 * `s` must be a valid handle and `out_json` a valid pointer.
 */
enum TscStatus tsc_decompose(const struct TscScenario *s, char **out_json);

/**
 * Stability certificate as JSON; `*out_stable` is 1 when a route certifies.
 *
 * # Safety
 * `s` must be a valid handle; `out_json` and `out_stable` valid pointers.
 */
enum TscStatus tsc_certify(const struct TscScenario *s, char **out_json, int *out_stable);

/**
 * Simulated trajectory as CSV. `step <= 0` uses the scenario's configured step.
 *
 * # Safety
 * `s` must be a valid handle and `out_csv` a valid pointer.
 */
enum TscStatus tsc_simulate_csv(const struct TscScenario *s, double step, char **out_csv);

/**
 * Eigenvalues of B in ascending order. `*out_len` always receives the
 * dimension; `BufferTooSmall` is returned when `cap` is less than it.
 *
 * # Safety
 * `s` must be a valid handle, `out_len` a valid pointer, and `buf` valid for
 * `cap` writes (it may be null when `cap` is 0).
 */
enum TscStatus tsc_eigenvalues(const struct TscScenario *s,
                               double *buf,
                               size_t cap,
                               size_t *out_len);

/**
 * Spectral norm of the generalized exponential `e_{-γB}(t, t0)`.
 *
 * # Safety
 * `s` must be a valid handle and `out` a valid pointer.
 */
enum TscStatus tsc_ts_exponential_norm(const struct TscScenario *s,
                                       double t0,
                                       double t,
                                       double *out);

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next library call on this thread.
 */
const char *tsc_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `p` must come from this library and not be used afterwards.
 */
void tsc_string_free(char *p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TSCONSENSUS_H */
