#ifndef TANGENT_H
#define TANGENT_H

/* Generated by cbindgen from tangent-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible C-ABI call.
typedef enum TangentStatus {
  // Success; out-parameters are valid.
  TANGENT_STATUS_OK = 0,
  // A required pointer argument was NULL.
  TANGENT_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  TANGENT_STATUS_INVALID_UTF8 = 2,
  // The curve literal did not parse.
  TANGENT_STATUS_INVALID_LITERAL = 3,
  // Options or numeric arguments were out of range.
  TANGENT_STATUS_INVALID_CONFIG = 4,
  // The requested datum is not present on this report.
  TANGENT_STATUS_UNAVAILABLE = 5,
  // An internal panic was caught; see tangent_last_error().
  TANGENT_STATUS_PANIC = 6,
} TangentStatus;

// Verdict of a classification, mirroring the report's verdict.
typedef enum TangentVerdict {
  TANGENT_VERDICT_TANGENT = 0,
  TANGENT_VERDICT_CORNER = 1,
  TANGENT_VERDICT_DEGENERATE = 2,
  TANGENT_VERDICT_UNDETERMINED = 3,
} TangentVerdict;

// Opaque parsed-curve handle.
typedef struct TangentCurve TangentCurve;

// Opaque classification-report handle.
typedef struct TangentReport TangentReport;

// Limit-estimation options. Obtain defaults from
// `tangent_options_default()` and adjust fields as needed.
typedef struct TangentOptions {
  // Initial parameter step.
  double h0;
  // Step shrink factor per probe, in (0, 1).
  double rho;
  // Pairwise angular agreement (radians) required for convergence.
  double angle_tol;
  // Number of consecutive estimates that must agree.
  size_t window;
  // Length of the probe schedule per side.
  size_t max_steps;
  // Collinearity tolerance for matching side limits.
  double collinear_tol;
} TangentOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread. Never
// NULL; empty before the first failure. Valid until the next failing
// call on the same thread. Do not free.
const char *tangent_last_error(void);

// Library version as a static string. Do not free.
const char *tangent_version(void);

// Default estimation options.
struct TangentOptions tangent_options_default(void);

// Parse a curve literal such as `"x=cos(t); y=sin(t)"` or `"f=abs(t)"`.
// On success the caller owns `*out` and frees it with
// `tangent_curve_free`.
//
// # Safety
// `src` must be a NUL-terminated string and `out` a valid pointer.
enum TangentStatus tangent_curve_parse(const char *src, struct TangentCurve **out);

// Free a curve handle. NULL is a no-op.
//
// # Safety
// `curve` must be NULL or a pointer from `tangent_curve_parse` that
// has not been freed yet.
void tangent_curve_free(struct TangentCurve *curve);

// Classify the tangent of `curve` at parameter `t0`. `options` may be
// NULL for defaults. Always produces a report on success — an
// unevaluable base point yields a Degenerate report, not an error.
// The caller owns `*out` and frees it with `tangent_report_free`.
//
// # Safety
// `curve` must be a live handle; `options` NULL or valid; `out` valid.
enum TangentStatus tangent_classify(const struct TangentCurve *curve,
                                    double t0,
                                    const struct TangentOptions *options,
                                    struct TangentReport **out);

// Free a report handle. NULL is a no-op.
//
// # Safety
// `report` must be NULL or a pointer from `tangent_classify` that has
// not been freed yet.
void tangent_report_free(struct TangentReport *report);

// Verdict of the classification.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum TangentStatus tangent_report_verdict(const struct TangentReport *report,
                                          enum TangentVerdict *out);

// Parameter value the report was computed at.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum TangentStatus tangent_report_t0(const struct TangentReport *report, double *out);

// Base point of the classification. `out_xyz` receives three doubles.
// Unavailable when the base point could not be evaluated.
//
// # Safety
// `report` must be a live handle; `out_xyz` must point to three
// writable doubles.
enum TangentStatus tangent_report_point(const struct TangentReport *report, double *out_xyz);

// Canonical tangent direction. `out_xyz` receives three doubles.
// Unavailable unless the verdict is Tangent.
//
// # Safety
// `report` must be a live handle; `out_xyz` must point to three
// writable doubles.
enum TangentStatus tangent_report_direction(const struct TangentReport *report, double *out_xyz);

// Tangent line as base point plus unit direction. Unavailable unless
// the verdict is Tangent.
//
// # Safety
// `report` must be a live handle; `out_point_xyz` and `out_dir_xyz`
// must each point to three writable doubles.
enum TangentStatus tangent_report_line(const struct TangentReport *report,
                                       double *out_point_xyz,
                                       double *out_dir_xyz);

// Collinearity residual between the side limits, when both exist.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum TangentStatus tangent_report_residual(const struct TangentReport *report, double *out);

// Probe counts consumed by the minus and plus side estimates.
//
// # Safety
// `report` must be a live handle; `out_minus` and `out_plus` must be
// valid pointers.
enum TangentStatus tangent_report_steps(const struct TangentReport *report,
                                        size_t *out_minus,
                                        size_t *out_plus);

// Render the report as one machine-format JSON record (same schema as
// the CLI's machine output). The caller owns `*out` and frees it with
// `tangent_string_free`.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum TangentStatus tangent_report_json(const struct TangentReport *report, char **out);

// Free a string returned through a `char **` out-parameter. NULL is a
// no-op.
//
// # Safety
// `s` must be NULL or an unfreed string returned by this library.
void tangent_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TANGENT_H */
