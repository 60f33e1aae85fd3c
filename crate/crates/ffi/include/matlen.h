#ifndef MATLEN_H
#define MATLEN_H

/* Generated by cbindgen from matlen-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every matlen FFI function.
 */
typedef enum MatlenStatus {
  MATLEN_STATUS_OK = 0,
  MATLEN_STATUS_NULL_POINTER = 1,
  MATLEN_STATUS_INVALID_ARGUMENT = 2,
  MATLEN_STATUS_DIMENSION_MISMATCH = 3,
  MATLEN_STATUS_NON_FINITE = 4,
  MATLEN_STATUS_EIGEN_FAILURE = 5,
  MATLEN_STATUS_CAP_EXCEEDED = 6,
  MATLEN_STATUS_BUDGET_EXCEEDED = 7,
  MATLEN_STATUS_OVERFLOW = 8,
  MATLEN_STATUS_INCONSISTENT = 9,
  MATLEN_STATUS_IO = 10,
  MATLEN_STATUS_PARSE = 11,
} MatlenStatus;

/**
 * Opaque handle to a tuple of n×n complex matrices.
 */
typedef struct MatlenSystem MatlenSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread; empty string if
 * none. The pointer stays valid until the next failing call on the thread.
 */
const char *matlen_last_error_message(void);

/**
 * Creates a system of `g` matrices of size `n`×`n` from `entries`:
 * `2·g·n·n` doubles, matrix after matrix, each row-major with interleaved
 * real and imaginary parts. On success writes the handle to `out`.
 *
 * # Safety
 * `entries` must point to `2·g·n·n` readable doubles and `out` to a
 * writable pointer slot.
 */
enum MatlenStatus matlen_system_new(uintptr_t n,
                                    uintptr_t g,
                                    const double *entries,
                                    struct MatlenSystem **out);

/**
 * Releases a handle created by [`matlen_system_new`]. NULL is a no-op.
 *
 * # Safety
 * `sys` must be NULL or a pointer obtained from [`matlen_system_new`] that
 * has not been freed yet.
 */
void matlen_system_free(struct MatlenSystem *sys);

/**
 * Wie-length of the system: minimal k with the length-k words spanning
 * M_n(C); `-1` if the system does not Wie-generate.
 *
 * # Safety
 * `sys` must be a live handle and `out` a writable `int64_t` slot.
 */
enum MatlenStatus matlen_wie_length(const struct MatlenSystem *sys, int64_t *out);

/**
 * Length of the system (identity allowed as a letter); `-1` if the system
 * does not generate.
 *
 * # Safety
 * `sys` must be a live handle and `out` a writable `int64_t` slot.
 */
enum MatlenStatus matlen_length(const struct MatlenSystem *sys, int64_t *out);

/**
 * Lie-length of the system, whose matrices must be traceless
 * skew-Hermitian; `-1` if the system does not Lie-generate su(n).
 *
 * # Safety
 * `sys` must be a live handle and `out` a writable `int64_t` slot.
 */
enum MatlenStatus matlen_lie_length(const struct MatlenSystem *sys, int64_t *out);

/**
 * Index of eventual full Kraus rank of the channel whose Kraus operators
 * are the system's matrices (they must be trace preserving); `-1` if the
 * channel is not primitive.
 *
 * # Safety
 * `sys` must be a live handle and `out` a writable `int64_t` slot.
 */
enum MatlenStatus matlen_channel_index(const struct MatlenSystem *sys, int64_t *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MATLEN_H */
