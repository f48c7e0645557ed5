#ifndef CLAIRAUT_H
#define CLAIRAUT_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  CLAIRAUT_STATUS_OK = 0,
  /**
   * The run completed and at least one gating check failed.
   */
  CLAIRAUT_STATUS_CHECK_FAILED = 1,
  /**
   * Scenario or argument validation failed.
   */
  CLAIRAUT_STATUS_INVALID_INPUT = 2,
  /**
   * A numerical error during evaluation (singular metric, domain exit, ...).
   */
  CLAIRAUT_STATUS_RUNTIME_ERROR = 3,
  CLAIRAUT_STATUS_NULL_POINTER = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  CLAIRAUT_STATUS_PANIC = 5,
} ClairautStatus;

typedef enum {
  CLAIRAUT_FORMAT_HUMAN = 0,
  CLAIRAUT_FORMAT_MACHINE = 1,
} ClairautFormat;

/**
 * A parsed symbolic expression.
 */
typedef struct ClairautExpr ClairautExpr;

/**
 * A loaded and validated scenario.
 */
typedef struct ClairautScenarioHandle ClairautScenarioHandle;

/**
 * An integrated geodesic with its Clairaut invariant.
 */
typedef struct ClairautTrajectory ClairautTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library and valid until the next call on this thread.
 */
const char *clairaut_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *clairaut_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed at most once.
 */
void clairaut_string_free(char *s);

/**
 * Loads a scenario file, or a bundled scenario by name.
 *
 * # Safety
 * `path` must be a valid C string; `out` must be writable.
 */
ClairautStatus clairaut_scenario_load(const char *path, ClairautScenarioHandle **out);

/**
 * Parses scenario TOML held in memory.
 *
 * # Safety
 * `text` and `name` must be valid C strings; `out` must be writable.
 */
ClairautStatus clairaut_scenario_from_str(const char *text,
                                          const char *name,
                                          ClairautScenarioHandle **out);

/**
 * Overrides seed, sample count and tolerance scale. A negative `seed`,
 * zero `samples` or non-positive `tolerance_scale` leaves that setting alone.
 *
 * # Safety
 * `sc` must be a live scenario handle.
 */
ClairautStatus clairaut_scenario_configure(ClairautScenarioHandle *sc,
                                           int64_t seed,
                                           size_t samples,
                                           double tolerance_scale);

/**
 * Dimension of the total space.
 *
 * # Safety
 * `sc` must be null or a live scenario handle.
 */
size_t clairaut_scenario_dim(const ClairautScenarioHandle *sc);

/**
 * Runs every check. On `OK` or `CHECK_FAILED`, `*report` receives the
 * rendered report (free with [`clairaut_string_free`]).
 *
 * # Safety
 * `sc` must be a live scenario handle; `report` must be writable.
 */
ClairautStatus clairaut_scenario_run(const ClairautScenarioHandle *sc,
                                     ClairautFormat format,
                                     char **report);

/**
 * # Safety
 * `sc` must be null or a handle from this library, freed at most once.
 */
void clairaut_scenario_free(ClairautScenarioHandle *sc);

/**
 * Integrates a geodesic from `p0` with velocity `v0`, both of length `dim`.
 *
 * # Safety
 * `p0` and `v0` must point to `dim` doubles; `out` must be writable.
 */
ClairautStatus clairaut_geodesic(const ClairautScenarioHandle *sc,
                                 const double *p0,
                                 const double *v0,
                                 size_t dim,
                                 double length,
                                 double step,
                                 ClairautTrajectory **out);

/**
 * # Safety
 * `t` must be null or a live trajectory handle.
 */
size_t clairaut_trajectory_len(const ClairautTrajectory *t);

/**
 * Copies sample `index`. `point` and `velocity` may be null; otherwise they
 * must hold `dim` doubles. Scalar outputs may also be null.
 *
 * # Safety
 * Pointers must be valid for the sizes described above.
 */
ClairautStatus clairaut_trajectory_sample(const ClairautTrajectory *t,
                                          size_t index,
                                          double *s,
                                          double *point,
                                          double *velocity,
                                          double *sin_theta,
                                          double *invariant);

/**
 * Relative drift of the Clairaut invariant and relative energy drift.
 *
 * # Safety
 * `t` must be a live trajectory handle; outputs may be null.
 */
ClairautStatus clairaut_trajectory_drift(const ClairautTrajectory *t,
                                         double *invariant_drift,
                                         double *energy_drift);

/**
 * Writes the trajectory as CSV.
 *
 * # Safety
 * `t` must be a live trajectory handle; `path` a valid C string.
 */
ClairautStatus clairaut_trajectory_write_csv(const ClairautTrajectory *t, const char *path);

/**
 * # Safety
 * `t` must be null or a handle from this library, freed at most once.
 */
void clairaut_trajectory_free(ClairautTrajectory *t);

/**
 * Parses an expression in `dim` variables. On a syntax error `*position`
 * (if non-null) receives the 1-based character position.
 *
 * # Safety
 * `text` must be a valid C string; `out` writable; `position` null or writable.
 */
ClairautStatus clairaut_expr_parse(const char *text,
                                   size_t dim,
                                   ClairautExpr **out,
                                   size_t *position);

/**
 * # Safety
 * `e` must be a live expression; `point` must hold `len` doubles; `value` writable.
 */
ClairautStatus clairaut_expr_eval(const ClairautExpr *e,
                                  const double *point,
                                  size_t len,
                                  double *value);

/**
 * Symbolic partial derivative with respect to the zero-based variable `index`.
 *
 * # Safety
 * `e` must be a live expression; `out` writable.
 */
ClairautStatus clairaut_expr_diff(const ClairautExpr *e, size_t index, ClairautExpr **out);

/**
 * Fully parenthesised text of the expression, or null on a null handle.
 *
 * # Safety
 * `e` must be null or a live expression.
 */
char *clairaut_expr_to_string(const ClairautExpr *e);

/**
 * # Safety
 * `e` must be null or a handle from this library, freed at most once.
 */
void clairaut_expr_free(ClairautExpr *e);

/**
 * Preset catalog, one per line. Free with [`clairaut_string_free`].
 */
char *clairaut_presets(void);

/**
 * Non-zero when `status` means the call produced its outputs.
 */
int clairaut_status_has_output(ClairautStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLAIRAUT_H */
