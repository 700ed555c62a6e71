#ifndef WPKSTAB_H
#define WPKSTAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum WpkStatus {
  WPK_STATUS_OK = 0,
  WPK_STATUS_NULL_POINTER = 1,
  WPK_STATUS_INVALID_UTF8 = 2,
  WPK_STATUS_MALFORMED = 3,
  WPK_STATUS_OUT_OF_DOMAIN = 4,
  WPK_STATUS_EMPTY_CURVE = 5,
  WPK_STATUS_NOT_WELL_FORMED = 6,
  WPK_STATUS_NOT_CONTRACTED_HERE = 7,
  WPK_STATUS_DEGENERATE = 8,
  WPK_STATUS_OTHER_ERROR = 9,
  WPK_STATUS_PANIC = 10,
} WpkStatus;

typedef enum WpkVerdict {
  WPK_VERDICT_UNSTABLE = 0,
  WPK_VERDICT_STRICTLY_SEMISTABLE = 1,
  WPK_VERDICT_POLYSTABLE = 2,
  WPK_VERDICT_STABLE = 3,
} WpkVerdict;

/**
 * A curve of the family. Opaque to C.
 */
typedef struct WpkPoint WpkPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *wpk_last_error(void);

/**
 * Parses a point from JSON such as `{"n":3,"a":"-2","ai":["5/2",...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum WpkStatus wpk_point_from_json(const char *json, struct WpkPoint **out);

/**
 * The maximally degenerate curve of the family for `n`.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum WpkStatus wpk_point_dss(uint64_t n, struct WpkPoint **out);

/**
 * The monomial curve with a_e = 1 and every other coefficient zero.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum WpkStatus wpk_point_monomial(uint64_t n, uint64_t e, struct WpkPoint **out);

/**
 * # Safety
 * `p` must come from a `wpk_point_*` constructor and not be freed twice.
 */
void wpk_point_free(struct WpkPoint *p);

/**
 * # Safety
 * `p` must be a live handle and `out` a writable pointer.
 */
enum WpkStatus wpk_point_to_json(const struct WpkPoint *p, char **out);

/**
 * Wall schedule for `n` as JSON.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum WpkStatus wpk_walls_json(uint64_t n, char **out);

/**
 * K-stability verdict at weight `w` ("p/q").
 *
 * # Safety
 * `p` must be a live handle, `w` a NUL-terminated string, `out` writable.
 */
enum WpkStatus wpk_classify(const struct WpkPoint *p, const char *w, enum WpkVerdict *out);

/**
 * GIT verdict at weight `w` as JSON.
 *
 * # Safety
 * `p` must be a live handle, `w` a NUL-terminated string, `out` writable.
 */
enum WpkStatus wpk_git_json(const struct WpkPoint *p, const char *w, char **out);

/**
 * Log canonical threshold report as JSON.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum WpkStatus wpk_lct_json(const struct WpkPoint *p, char **out);

/**
 * Semistable and polystable weight sets as JSON.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum WpkStatus wpk_kss_domain_json(const struct WpkPoint *p, char **out);

/**
 * Releases a string returned through an `out` parameter.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void wpk_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* WPKSTAB_H */
