#ifndef SHEPARD_BERNOULLI_H
#define SHEPARD_BERNOULLI_H

/* Generated by cbindgen from the shepard-bernoulli-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define SB_MODE_BERNOULLI 0

#define SB_MODE_TAYLOR 1

#define SB_JETS_ANALYTIC 0

#define SB_JETS_WLS_QUADRATIC 1

#define SB_JETS_WLS_CUBIC 2

#define SB_FALLBACK_ERROR 0

#define SB_FALLBACK_NEAREST 1

/**
 * Result code of every call.
 */
typedef enum SbStatus {
  SB_OK = 0,
  SB_NULL_POINTER = 1,
  SB_INVALID_ARGUMENT = 2,
  SB_DEGENERATE_GEOMETRY = 3,
  SB_ASSOCIATION_FAILED = 4,
  SB_FIT_FAILED = 5,
  SB_NOT_COVERED = 6,
  SB_EVALUATION_FAILED = 7,
  SB_INTERNAL_ERROR = 99,
} SbStatus;

/**
 * Opaque interpolant handle.
 */
typedef struct SbInterpolant SbInterpolant;

/**
 * Interpolant settings. `n_q = 0` picks 13 for quadratic and 17 for cubic
 * fits.
 */
typedef struct SbConfig {
  uint32_t degree;
  double mu;
  uint32_t n_w;
  uint32_t n_q;
  /**
   * One of the `SB_MODE_*` constants.
   */
  uint32_t mode;
  /**
   * One of the `SB_JETS_*` constants.
   */
  uint32_t jet_source;
  /**
   * One of the `SB_FALLBACK_*` constants.
   */
  uint32_t fallback;
} SbConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default settings: degree 3 Bernoulli mode, mu 2, 9 basis neighbours,
 * quadratic least-squares jets, error on uncovered points.
 */
struct SbConfig sb_config_default(void);

/**
 * Builds an interpolant from node coordinates and function values. The
 * configuration must use a least-squares jet source.
 *
 * # Safety
 * `xs`, `ys` and `values` must each point to `n` doubles; `config` must be
 * null or point to a valid `SbConfig`; `out` must be writable. On failure
 * `*out` is set to null.
 */
enum SbStatus sb_interpolant_build(const double *xs,
                                   const double *ys,
                                   const double *values,
                                   size_t n,
                                   const struct SbConfig *config,
                                   struct SbInterpolant **out);

/**
 * Builds an interpolant from values and derivatives. `derivs` holds `6 * n`
 * doubles, one row `f, fx, fy, fxx, fxy, fyy` per node. The configuration
 * must use the analytic jet source and need derivatives of order at most 2.
 *
 * # Safety
 * `xs` and `ys` must point to `n` doubles and `derivs` to `6 * n`; `config`
 * must be null (defaults with analytic jets) or valid; `out` must be
 * writable. On failure `*out` is null.
 */
enum SbStatus sb_interpolant_build_with_derivs(const double *xs,
                                               const double *ys,
                                               const double *derivs,
                                               size_t n,
                                               const struct SbConfig *config,
                                               struct SbInterpolant **out);

/**
 * Evaluates the interpolant at `(x, y)`.
 *
 * # Safety
 * `itp` must be a live handle and `out` writable.
 */
enum SbStatus sb_interpolant_eval(const struct SbInterpolant *itp, double x, double y, double *out);

/**
 * Evaluates at `n` points. On failure the contents of `out` are
 * unspecified.
 *
 * # Safety
 * `itp` must be a live handle; `xs`, `ys` must point to `n` doubles and
 * `out` to `n` writable doubles.
 */
enum SbStatus sb_interpolant_eval_many(const struct SbInterpolant *itp,
                                       const double *xs,
                                       const double *ys,
                                       size_t n,
                                       double *out);

/**
 * Number of nodes, or 0 for a null handle.
 *
 * # Safety
 * `itp` must be null or a live handle.
 */
size_t sb_interpolant_node_count(const struct SbInterpolant *itp);

/**
 * Releases a handle. Null is accepted.
 *
 * # Safety
 * `itp` must be null or a handle not yet freed.
 */
void sb_interpolant_free(struct SbInterpolant *itp);

/**
 * Static description of a status code; unknown codes get a generic text.
 */
const char *sb_status_message(int32_t status);

/**
 * Detailed message of the most recent failure on this thread, or an empty
 * string. The pointer stays valid until the next call on the same thread.
 */
const char *sb_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHEPARD_BERNOULLI_H */
