#ifndef RPOISSON_H
#define RPOISSON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum RpStatus {
  RP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  RP_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  RP_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed spec: schema, syntax or dimension errors.
   */
  RP_STATUS_INPUT_ERROR = 3,
  /**
   * The input is well formed but the computation failed, e.g. a
   * non-involutive distribution or a non-Poisson bivector.
   */
  RP_STATUS_MATH_ERROR = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  RP_STATUS_PANIC = 5,
} RpStatus;

/**
 * Parsed manifold spec. Opaque to C.
 */
typedef struct RpManifold RpManifold;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a manifold spec.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer. On
 * success `*out` holds a handle to release with [`rp_manifold_free`].
 */
enum RpStatus rp_manifold_from_json(const char *json, struct RpManifold **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `m` must come from [`rp_manifold_from_json`] and not be used afterwards.
 */
void rp_manifold_free(struct RpManifold *m);

/**
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum RpStatus rp_is_poisson(const struct RpManifold *m, bool *out);

/**
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum RpStatus rp_is_riemann_poisson(const struct RpManifold *m, bool *out);

/**
 * Full check pipeline as a JSON report. A failing check is not an error:
 * the report's verdicts say what failed.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum RpStatus rp_check_report_json(const struct RpManifold *m, char **out);

/**
 * Christoffel table report as JSON.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum RpStatus rp_christoffel_json(const struct RpManifold *m, char **out);

/**
 * Truncated Betti number of degree `p` with coefficient degree at most `window`.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum RpStatus rp_truncated_betti(const struct RpManifold *m,
                                 size_t p,
                                 uint32_t window,
                                 size_t *out);

/**
 * Builds and certifies the structure of a foliation spec, returning the
 * resulting manifold spec as JSON.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum RpStatus rp_construct_from_foliation_json(const char *json, char **out);

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library on the same thread.
 */
const char *rp_last_error_message(void);

/**
 * Releases a string returned through an out-pointer. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void rp_string_free(char *s);

/**
 * Library version, statically allocated.
 */
const char *rp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RPOISSON_H */
