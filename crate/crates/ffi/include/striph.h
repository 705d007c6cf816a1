/* C interface to the striph solver. Generated by cbindgen; do not edit. */

#ifndef STRIPH_H
#define STRIPH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit codes, plus argument validation.
 */
typedef enum StriphStatus {
  StriphStatus_Ok = 0,
  /**
   * a measured quantity violated its gate
   */
  StriphStatus_Contract = 1,
  /**
   * bad arguments, unknown preset or spec
   */
  StriphStatus_Config = 2,
  /**
   * quadrature failure, divergent weight, inconclusive calibration
   */
  StriphStatus_Numerical = 3,
  /**
   * a required pointer was null
   */
  StriphStatus_NullArgument = 4,
} StriphStatus;

/**
 * Opaque boundary datum handle.
 */
typedef struct StriphFunction StriphFunction;

/**
 * Opaque solution handle.
 */
typedef struct StriphSolution StriphSolution;

/**
 * Opaque weight handle.
 */
typedef struct StriphWeight StriphWeight;

/**
 * Muckenhoupt analysis result; optional fields are paired with `has_` flags.
 */
typedef struct StriphWeightReport {
  double p;
  double ap_constant;
  bool in_ap;
  bool has_inclusion_q;
  double inclusion_q;
  bool has_reverse_holder;
  double rh_delta;
  double rh_constant;
  uint32_t resolution;
} StriphWeightReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Look up a boundary datum preset (`xsinx`, `sinx`, `poly`).
 *
 * # Safety
 * `name` must be a valid NUL-terminated string; `out` must be a valid
 * pointer. On success `*out` owns a handle to release with
 * [`striph_function_free`].
 */
enum StriphStatus striph_function_preset(const char *name, struct StriphFunction **out);

/**
 * # Safety
 * `ptr` must come from this library and not have been freed.
 */
void striph_function_free(struct StriphFunction *ptr);

/**
 * Parse a weight spec (`one`, `power:alpha=<a>`, `shifted:c=<c>`).
 *
 * # Safety
 * `spec` must be a valid NUL-terminated string; `out` must be valid. On
 * success `*out` owns a handle to release with [`striph_weight_free`].
 */
enum StriphStatus striph_weight_parse(const char *spec, struct StriphWeight **out);

/**
 * # Safety
 * `ptr` must come from this library and not have been freed.
 */
void striph_weight_free(struct StriphWeight *ptr);

/**
 * Muckenhoupt constant estimation plus reverse-Hölder probe.
 *
 * # Safety
 * `w` and `out` must be valid pointers.
 */
enum StriphStatus striph_weight_report(const struct StriphWeight *w,
                                       double p,
                                       uint32_t resolution,
                                       struct StriphWeightReport *out);

/**
 * Build the truncated series solution with an explicit growth multiplier.
 *
 * # Safety
 * `f` and `out` must be valid pointers. On success `*out` owns a handle to
 * release with [`striph_solution_free`].
 */
enum StriphStatus striph_solve(const struct StriphFunction *f,
                               uint32_t n_modes,
                               double lambda,
                               double tol,
                               struct StriphSolution **out);

/**
 * Build the solution with the growth multiplier picked by the
 * finite-difference calibration; the chosen value lands in `lambda_out`
 * when that pointer is non-null.
 *
 * # Safety
 * `f` and `out` must be valid pointers; `lambda_out` may be null.
 */
enum StriphStatus striph_solve_calibrated(const struct StriphFunction *f,
                                          uint32_t n_modes,
                                          double tol,
                                          struct StriphSolution **out,
                                          double *lambda_out);

/**
 * # Safety
 * `ptr` must come from this library and not have been freed.
 */
void striph_solution_free(struct StriphSolution *ptr);

/**
 * # Safety
 * `sol` must be a valid solution handle.
 */
uint32_t striph_solution_modes(const struct StriphSolution *sol);

/**
 * # Safety
 * `sol` must be a valid solution handle.
 */
double striph_solution_lambda(const struct StriphSolution *sol);

/**
 * Field value at a point; NaN on a null handle.
 *
 * # Safety
 * `sol` must be a valid solution handle.
 */
double striph_solution_eval(const struct StriphSolution *sol, double x, double y);

/**
 * Writes `u, u_x, u_y, u_xx, u_yy` at a point into `out[0..5]`.
 *
 * # Safety
 * `sol` must be valid and `out` must point to at least five doubles.
 */
enum StriphStatus striph_solution_eval_field(const struct StriphSolution *sol,
                                             double x,
                                             double y,
                                             double *out);

/**
 * Upper bound on the dropped series tail at height `y`.
 *
 * # Safety
 * `sol` must be a valid solution handle.
 */
double striph_solution_tail_estimate(const struct StriphSolution *sol, double y);

/**
 * Max absolute periodicity gap and left-edge x-derivative over a height
 * ladder, written into `out[0..2]`; both are structural zeros for solved
 * fields.
 *
 * # Safety
 * `sol` must be valid and `out` must point to at least two doubles.
 */
enum StriphStatus striph_solution_boundary_gaps(const struct StriphSolution *sol, double *out);

/**
 * Serialize the solution; the returned string is released with
 * [`striph_string_free`].
 *
 * # Safety
 * `sol` and `out` must be valid pointers.
 */
enum StriphStatus striph_solution_to_json(const struct StriphSolution *sol, char **out);

/**
 * Rebuild a solution from its JSON document.
 *
 * # Safety
 * `doc` must be a valid NUL-terminated string; `out` must be valid. On
 * success `*out` owns a handle to release with [`striph_solution_free`].
 */
enum StriphStatus striph_solution_from_json(const char *doc, struct StriphSolution **out);

/**
 * # Safety
 * `s` must have been returned by this library and not yet freed.
 */
void striph_string_free(char *s);

/**
 * Max deviation of the order-`n` pairing matrix from the identity, written
 * into `out`; the biorthonormality gate is `1e-8`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StriphStatus striph_gram_max_deviation(uint32_t n, double tol, double *out);

/**
 * Static name of a status code.
 */
const char *striph_status_name(enum StriphStatus status);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* STRIPH_H */
