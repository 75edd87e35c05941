#ifndef QPOCH_H
#define QPOCH_H

#pragma once

/* Generated by cbindgen from qpoch-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum QpStatus {
  QP_STATUS_OK = 0,
  QP_STATUS_INVALID_PARAMETER = 1,
  QP_STATUS_CONVERGENCE = 2,
  QP_STATUS_BRANCH = 3,
  QP_STATUS_RESOURCE_LIMIT = 4,
  /**
   * A result would not fit the requested representation.
   */
  QP_STATUS_UNREPRESENTABLE = 5,
  QP_STATUS_NULL_POINTER = 6,
  QP_STATUS_INTERNAL = 7,
} QpStatus;

/**
 * Saddle constants and cached expansion contexts at a fixed precision.
 */
typedef struct QpEngine QpEngine;

/**
 * Last error message on this thread, or null. Valid until the next call on
 * the same thread.
 */
const char *qp_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void qp_string_free(char *s);

/**
 * Create an engine working with `digits` significant decimal digits (at least 30).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QpStatus qp_engine_new(uint32_t digits, struct QpEngine **out);

/**
 * Destroy an engine. Null is ignored.
 *
 * # Safety
 * `engine` must come from [`qp_engine_new`] and not have been freed.
 */
void qp_engine_free(struct QpEngine *engine);

/**
 * The dilogarithm zero `w0` as doubles.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QpStatus qp_engine_w0(const struct QpEngine *engine, double *re, double *im);

/**
 * Asymptotic approximation of `A_m(e^(2 pi i h/k), N)` with `r` terms, as doubles.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QpStatus qp_asym_laurent(const struct QpEngine *engine,
                              uint32_t k,
                              int64_t h,
                              int64_t m,
                              uint32_t big_n,
                              uint32_t r,
                              double *re,
                              double *im);

/**
 * Same as [`qp_asym_laurent`] but as a decimal string with `digits` significant digits.
 *
 * # Safety
 * Pointers must be valid; free the result with [`qp_string_free`].
 */
enum QpStatus qp_asym_laurent_string(const struct QpEngine *engine,
                                     uint32_t k,
                                     int64_t h,
                                     int64_t m,
                                     uint32_t big_n,
                                     uint32_t r,
                                     uint32_t digits,
                                     char **out);

/**
 * Asymptotic approximation of the wave `W_k(N, n)` with `r` terms.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QpStatus qp_asym_wave(const struct QpEngine *engine,
                           uint32_t k,
                           uint32_t big_n,
                           int64_t n,
                           uint32_t r,
                           double *out);

/**
 * Exact `A_m(e^(2 pi i h/k), N)` as a string: an element of `Q(xi)` in powers
 * of `xi = e^(2 pi i/k)`. `M = floor(N/k) + m` is limited to 2000.
 *
 * # Safety
 * `out` must be valid; free the result with [`qp_string_free`].
 */
enum QpStatus qp_exact_laurent_string(uint32_t k, int64_t h, int64_t m, uint32_t big_n, char **out);

/**
 * `A_m(e^(2 pi i h/k), N)` to at least `digits` verified digits, as a decimal string.
 *
 * # Safety
 * `out` must be valid; free the result with [`qp_string_free`].
 */
enum QpStatus qp_laurent_value(uint32_t k,
                               int64_t h,
                               int64_t m,
                               uint32_t big_n,
                               uint32_t digits,
                               char **out);

/**
 * Exact wave `W_k(N, n)` as a reduced fraction `p/q`. `N` is limited to 2000.
 *
 * # Safety
 * `out` must be valid; free the result with [`qp_string_free`].
 */
enum QpStatus qp_wave_exact_string(uint32_t k, uint32_t big_n, int64_t n, char **out);

/**
 * `W_k(N, n)` to at least `digits` verified digits, as a decimal string.
 *
 * # Safety
 * `out` must be valid; free the result with [`qp_string_free`].
 */
enum QpStatus qp_wave_value(uint32_t k, uint32_t big_n, int64_t n, uint32_t digits, char **out);

#endif  /* QPOCH_H */
