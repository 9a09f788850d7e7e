#ifndef SQHOM_H
#define SQHOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum SqhomStatus {
  SQHOM_STATUS_OK = 0,
  SQHOM_STATUS_INVALID_INPUT = 1,
  SQHOM_STATUS_DEGREE_OUT_OF_RANGE = 2,
  SQHOM_STATUS_NO_TARGET = 3,
  SQHOM_STATUS_UNSUPPORTED = 4,
  SQHOM_STATUS_AMBIGUOUS_SPECTRUM = 5,
  SQHOM_STATUS_CONFIG = 6,
  SQHOM_STATUS_INVARIANT_VIOLATION = 7,
  SQHOM_STATUS_NULL_POINTER = 8,
  SQHOM_STATUS_INVALID_UTF8 = 9,
  SQHOM_STATUS_PANIC = 10,
} SqhomStatus;

/**
 * Betti number methods available through [`sqhom_betti`].
 */
typedef enum SqhomBettiMethod {
  SQHOM_BETTI_METHOD_EXACT_RANK = 0,
  SQHOM_BETTI_METHOD_HODGE = 1,
  SQHOM_BETTI_METHOD_NORMALIZED_HODGE = 2,
} SqhomBettiMethod;

/**
 * A validated truncated simplicial set.
 */
typedef struct SqhomSet SqhomSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static nul-terminated string.
 */
const char *sqhom_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated and
 * nul-terminated) and returns the length of the full message plus one.
 * Returns 0 when there is no message.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t sqhom_last_error_message(char *buf, size_t len);

/**
 * Parses and validates a spec document.
 *
 * # Safety
 * `spec_json` must be a nul-terminated string and `out` valid for a write.
 */
enum SqhomStatus sqhom_set_from_spec(const char *spec_json, struct SqhomSet **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `set` must be null or a handle from [`sqhom_set_from_spec`] not yet freed.
 */
void sqhom_set_free(struct SqhomSet *set);

/**
 * # Safety
 * `set` must be a live handle and `out` valid for a write.
 */
enum SqhomStatus sqhom_set_cutoff(const struct SqhomSet *set, size_t *out);

/**
 * Number of simplices of the given degree.
 *
 * # Safety
 * `set` must be a live handle and `out` valid for a write.
 */
enum SqhomStatus sqhom_set_count(const struct SqhomSet *set, size_t degree, size_t *out);

/**
 * Number of non-degenerate simplices of the given degree.
 *
 * # Safety
 * `set` must be a live handle and `out` valid for a write.
 */
enum SqhomStatus sqhom_set_nondegenerate_count(const struct SqhomSet *set,
                                               size_t degree,
                                               size_t *out);

/**
 * `β_n` by the chosen method. `truncation_sensitive` (may be null) is set
 * to 1 when `degree` equals the cutoff.
 *
 * # Safety
 * `set` must be a live handle, `out` valid for a write, and
 * `truncation_sensitive` null or valid for a write.
 */
enum SqhomStatus sqhom_betti(const struct SqhomSet *set,
                             enum SqhomBettiMethod method,
                             size_t degree,
                             size_t *out,
                             int *truncation_sensitive);

/**
 * Phase-estimation estimate of `β_n` with `shots` seeded samples.
 * `p_zero` (may be null) receives the exact probability of clock value 0.
 *
 * # Safety
 * `set` must be a live handle, `estimate` valid for a write, and `p_zero`
 * null or valid for a write.
 */
enum SqhomStatus sqhom_qpe_betti(const struct SqhomSet *set,
                                 size_t degree,
                                 uint32_t clock_bits,
                                 size_t shots,
                                 uint64_t seed,
                                 size_t *estimate,
                                 double *p_zero);

/**
 * Runs a command-line invocation on a spec given as text and hands back
 * the JSON report. `argv` holds the arguments after the program name, with
 * `-` in place of the spec path. `exit_code` receives 0, 2 or 3 as the
 * tool would exit; the call itself succeeds whenever a report was produced.
 *
 * # Safety
 * `argv` must point to `argc` nul-terminated strings, `spec_json` must be
 * nul-terminated, `report` and `exit_code` valid for writes, and `seed_env`
 * null or nul-terminated.
 */
enum SqhomStatus sqhom_run(const char *const *argv,
                           size_t argc,
                           const char *spec_json,
                           const char *seed_env,
                           char **report,
                           int *exit_code);

/**
 * Releases a string returned by the library; null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void sqhom_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SQHOM_H */
