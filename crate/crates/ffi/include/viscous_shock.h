#ifndef VISCOUS_SHOCK_H
#define VISCOUS_SHOCK_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VsRegime {
  VS_REGIME_FAST = 0,
  VS_REGIME_SLOW = 1,
  VS_REGIME_NOT_EVOLUTIONARY = 2,
} VsRegime;

typedef enum VsStatus {
  VS_STATUS_OK = 0,
  VS_STATUS_NULL_POINTER = 1,
  VS_STATUS_INVALID_UTF8 = 2,
  VS_STATUS_PARSE = 3,
  VS_STATUS_VALIDATION = 4,
  VS_STATUS_UNPHYSICAL = 5,
  VS_STATUS_DEGENERATE = 6,
  VS_STATUS_NUMERICAL = 7,
  VS_STATUS_BUFFER_TOO_SMALL = 8,
  VS_STATUS_OUT_OF_RANGE = 9,
  VS_STATUS_PANIC = 10,
} VsStatus;

typedef enum VsVerdictKind {
  VS_VERDICT_KIND_ADMISSIBLE = 0,
  VS_VERDICT_KIND_NOT_ADMISSIBLE = 1,
  VS_VERDICT_KIND_DEGENERATE = 2,
} VsVerdictKind;

/**
 * A parsed scenario with its upstream constants.
 */
typedef struct VsScenario VsScenario;

/**
 * A computed profile.
 */
typedef struct VsTrajectory VsTrajectory;

/**
 * Fluxes fixed by the upstream state.
 */
typedef struct VsConstants {
  double t1[3];
  double h[4];
  double j;
  double mu_over_4pi;
  double y0;
} VsConstants;

typedef struct VsSpeeds {
  double u_sl;
  double u_a;
  double u_a_star;
  double u_f;
  double u1;
  enum VsRegime regime;
} VsSpeeds;

typedef struct VsPoint {
  double y;
  double v;
} VsPoint;

/**
 * Failed conditions as bits: A = 1, B = 2, C = 4, D = 8.
 */
typedef struct VsVerdict {
  enum VsVerdictKind kind;
  uint32_t failed;
  enum VsRegime regime;
  double target_y;
  double target_v;
} VsVerdict;

typedef struct VsProfilePoint {
  double x;
  double y;
  double v;
  double p;
  double eps;
  double n;
  double s;
} VsProfilePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *vs_last_error(void);

/**
 * Parses scenario text (the CLI's INI format) into a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum VsStatus vs_scenario_parse(const char *text, struct VsScenario **out);

/**
 * # Safety
 * `s` must come from [`vs_scenario_parse`] and not have been freed; null is ignored.
 */
void vs_scenario_free(struct VsScenario *s);

/**
 * # Safety
 * `s` must be a live scenario and `out` a valid pointer.
 */
enum VsStatus vs_scenario_constants(const struct VsScenario *s, struct VsConstants *out);

/**
 * Characteristic speeds and regime of the upstream state.
 *
 * # Safety
 * `s` must be a live scenario and `out` a valid pointer.
 */
enum VsStatus vs_speeds(const struct VsScenario *s, struct VsSpeeds *out);

/**
 * # Safety
 * `s` must be a live scenario and `out` a valid pointer.
 */
enum VsStatus vs_regime(const struct VsScenario *s, enum VsRegime *out);

/**
 * `(F1, F2)` at `(y, v)`, written to `out[0]` and `out[1]`.
 *
 * # Safety
 * `s` must be a live scenario and `out` must point to two doubles.
 */
enum VsStatus vs_field(const struct VsScenario *s, double y, double v, double *out);

/**
 * Rest points inside the scenario's search box, sorted by `y`.
 *
 * `*len` receives the number found. When it exceeds `cap` nothing is
 * written to `out` and [`VsStatus::BufferTooSmall`] is returned, so a call
 * with `cap = 0` sizes the buffer.
 *
 * # Safety
 * `s` must be a live scenario, `len` a valid pointer and `out` valid for
 * `cap` elements (may be null when `cap` is 0).
 */
enum VsStatus vs_rest_points(const struct VsScenario *s,
                             struct VsPoint *out,
                             size_t cap,
                             size_t *len);

/**
 * Admissibility of the transition from `"0"` to the rest point nearest
 * `(y, v)`.
 *
 * # Safety
 * `s` must be a live scenario and `out` a valid pointer.
 */
enum VsStatus vs_verdict(const struct VsScenario *s, double y, double v, struct VsVerdict *out);

/**
 * Integrates the profile from `"0"` to the rest point nearest `(y, v)`
 * with the scenario's viscosities and tolerances.
 *
 * # Safety
 * `s` must be a live scenario and `out` a valid pointer.
 */
enum VsStatus vs_profile(const struct VsScenario *s, double y, double v, struct VsTrajectory **out);

/**
 * Number of samples; 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live trajectory.
 */
size_t vs_trajectory_len(const struct VsTrajectory *t);

/**
 * Distance between the end of the integration and its target rest point.
 *
 * # Safety
 * `t` must be null or a live trajectory.
 */
double vs_trajectory_endpoint_distance(const struct VsTrajectory *t);

/**
 * # Safety
 * `t` must be a live trajectory and `out` a valid pointer.
 */
enum VsStatus vs_trajectory_get(const struct VsTrajectory *t,
                                size_t index,
                                struct VsProfilePoint *out);

/**
 * # Safety
 * `t` must come from [`vs_profile`] and not have been freed; null is ignored.
 */
void vs_trajectory_free(struct VsTrajectory *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VISCOUS_SHOCK_H */
