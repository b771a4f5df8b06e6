#ifndef SOSDYN_H
#define SOSDYN_H

/* This file is generated by cbindgen from sosdyn-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every entry point.
 */
typedef enum SosStatus {
  SosStatus_Ok = 0,
  SosStatus_NullArgument = 1,
  SosStatus_InvalidOrder = 2,
  SosStatus_InvalidTau = 3,
  SosStatus_InitialCondition = 4,
  SosStatus_NonpositiveInitial = 5,
  SosStatus_NotConstantField = 6,
  SosStatus_ConditionNotSatisfied = 7,
  SosStatus_InvalidField = 8,
  SosStatus_Overflow = 9,
  SosStatus_Underflow = 10,
  SosStatus_SpinOutOfRange = 11,
  SosStatus_ParseError = 12,
  SosStatus_IoError = 13,
  SosStatus_IndexOutOfRange = 14,
} SosStatus;

/**
 * Law families addressable over the ABI.
 */
typedef enum SosLawKind {
  SosLawKind_LeftInfinite = 0,
  SosLawKind_RightInfinite = 1,
  SosLawKind_BothInfinite = 2,
} SosLawKind;

/**
 * Opaque parameter handle.
 */
typedef struct SosParams SosParams;

/**
 * Opaque trajectory handle.
 */
typedef struct SosTrajectory SosTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Validated parameters with a constant field `h`.
 */
enum SosStatus sosdyn_params_new(uint32_t k,
                                 double tau,
                                 double h,
                                 double y0,
                                 double x1,
                                 struct SosParams **out);

/**
 * Parameters with `h(0) = 1` and a different constant on every other
 * height (the non-uniform worked case).
 */
enum SosStatus sosdyn_params_new_unit_zero_tail(uint32_t k,
                                                double tau,
                                                double h_tail,
                                                double y0,
                                                double x1,
                                                struct SosParams **out);

/**
 * Releases a parameter handle. Safe on null.
 *
 * # Safety
 * `p` must be a pointer previously returned through a `sosdyn_params_new*`
 * out parameter and not yet freed.
 */
void sosdyn_params_free(struct SosParams *p);

/**
 * The root of `θ + 1/θ = τ` in (0, 1).
 */
enum SosStatus sosdyn_params_theta(const struct SosParams *p, double *out);

/**
 * The cached map coefficient `y0 + x1 − τ`.
 */
enum SosStatus sosdyn_params_coeff0(const struct SosParams *p, double *out);

/**
 * One forward step of the planar map using the field value at `n`.
 */
enum SosStatus sosdyn_step_forward(const struct SosParams *p,
                                   double x,
                                   double y,
                                   uint64_t n,
                                   double *out_x,
                                   double *out_y);

/**
 * One backward step (the algebraic inverse of the forward step).
 */
enum SosStatus sosdyn_step_backward(const struct SosParams *p,
                                    double x,
                                    double y,
                                    uint64_t n,
                                    double *out_x,
                                    double *out_y);

/**
 * Forward orbit of `(x1, 1)`; the handle owns the points.
 */
enum SosStatus sosdyn_iterate(const struct SosParams *p,
                              uint64_t n_steps,
                              struct SosTrajectory **out);

/**
 * Number of points in the trajectory (steps + 1 unless it escaped).
 */
enum SosStatus sosdyn_trajectory_len(const struct SosTrajectory *t, uintptr_t *out);

/**
 * Point at `index`.
 */
enum SosStatus sosdyn_trajectory_point(const struct SosTrajectory *t,
                                       uintptr_t index,
                                       double *out_x,
                                       double *out_y);

/**
 * First index with `x ≤ 0`, or −1 when positivity held.
 */
enum SosStatus sosdyn_trajectory_first_nonpositive(const struct SosTrajectory *t, int64_t *out);

/**
 * Index whose `|x|` exceeded the escape bound, or −1.
 */
enum SosStatus sosdyn_trajectory_escaped_at(const struct SosTrajectory *t, int64_t *out);

/**
 * Max `|x|` along the trajectory.
 */
enum SosStatus sosdyn_trajectory_max_abs(const struct SosTrajectory *t, double *out);

/**
 * Releases a trajectory handle. Safe on null.
 *
 * # Safety
 * `t` must come from `sosdyn_iterate` and not be freed twice.
 */
void sosdyn_trajectory_free(struct SosTrajectory *t);

/**
 * First step with `x ≤ 0` within `n_max` steps, or −1.
 */
enum SosStatus sosdyn_positivity_horizon(const struct SosParams *p, uint64_t n_max, int64_t *out);

/**
 * Coordinate of the interior fixed point `(x*, x*)`.
 */
enum SosStatus sosdyn_interior_fixed_point(const struct SosParams *p, double *out);

/**
 * Fixed points, eigenvalues, regimes and resonances as a JSON string.
 */
enum SosStatus sosdyn_spectral_report_json(const struct SosParams *p, char **out);

/**
 * Invariant-region scalars plus the grid containment check as JSON.
 */
enum SosStatus sosdyn_invariant_set_json(const struct SosParams *p, uintptr_t grid_n, char **out);

/**
 * Boundary-law report (z-window, condition verdicts, residuals,
 * normalisability) for the normalized geometric field, as JSON.
 * `rho` is read for `BothInfinite` only.
 */
enum SosStatus sosdyn_boundary_law_report_json(enum SosLawKind kind,
                                               double theta,
                                               uint32_t k,
                                               double rho,
                                               int64_t imax,
                                               uintptr_t trunc_n,
                                               char **out);

/**
 * Releases a string returned by the `*_json` functions. Safe on null.
 *
 * # Safety
 * `s` must originate from this library and not be freed twice.
 */
void sosdyn_string_free(char *s);

/**
 * Static library version string.
 */
const char *sosdyn_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOSDYN_H */
