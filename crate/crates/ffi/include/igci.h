#ifndef IGCI_H
#define IGCI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

enum IgciStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  IGCI_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  IGCI_STATUS_NULL_POINTER = 1,
  /*
   An argument was out of range or an enum value was unknown.
   */
  IGCI_STATUS_INVALID_ARGUMENT = 2,
  /*
   The data cannot be scored: too short, non-finite, constant, all tied.
   */
  IGCI_STATUS_DATA_ERROR = 3,
  /*
   A numerical routine failed.
   */
  IGCI_STATUS_NUMERIC_ERROR = 4,
  /*
   An unexpected internal error; the library state is still valid.
   */
  IGCI_STATUS_PANIC = 5,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum IgciStatus IgciStatus;
#else
typedef int32_t IgciStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

enum IgciDirection
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  IGCI_DIRECTION_UNDECIDED = 0,
  IGCI_DIRECTION_X_TO_Y = 1,
  IGCI_DIRECTION_Y_TO_X = -1,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum IgciDirection IgciDirection;
#else
typedef int32_t IgciDirection;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

enum IgciEstimator
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  IGCI_ESTIMATOR_ENTROPY = 0,
  IGCI_ESTIMATOR_SLOPE = 1,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum IgciEstimator IgciEstimator;
#else
typedef int32_t IgciEstimator;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

enum IgciReference
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  /*
   Rescale each variable to `[0, 1]`.
   */
  IGCI_REFERENCE_UNIFORM = 0,
  /*
   Standardize each variable to zero mean and unit variance.
   */
  IGCI_REFERENCE_GAUSSIAN = 1,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum IgciReference IgciReference;
#else
typedef int32_t IgciReference;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/*
 Opaque handle to a validated pair of equal-length finite samples.
 */
typedef struct IgciPair IgciPair;

/*
 Result of [`igci_score`].
 */
typedef struct IgciReport {
  /*
   Negative values favour X causing Y.
   */
  double c_xy;
  double c_yx;
  IgciDirection direction;
  IgciEstimator estimator;
  IgciReference reference;
  uintptr_t m_used;
} IgciReport;

/*
 Result of [`igci_align_lag`]. `a[t]` pairs with `b[t + lag]`.
 */
typedef struct IgciLagAlignment {
  int64_t lag;
  double correlation;
  uintptr_t overlap_length;
} IgciLagAlignment;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies `len` values from each of `x` and `y` into a new pair handle.

 # Safety
 `x` and `y` must each point to `len` readable doubles; `out` must be
 writable. The handle written to `out` must be released with
 [`igci_pair_free`].
 */
IgciStatus igci_pair_new(const double *x, const double *y, uintptr_t len, struct IgciPair **out);

/*
 Number of observations in `pair`, or 0 for a null handle.

 # Safety
 `pair` must be null or a live handle from [`igci_pair_new`].
 */
uintptr_t igci_pair_len(const struct IgciPair *pair);

/*
 Releases a pair handle. Null is ignored.

 # Safety
 `pair` must be null or a handle from [`igci_pair_new`] not yet freed.
 */
void igci_pair_free(struct IgciPair *pair);

/*
 Scores `pair`. `reference` takes an [`IgciReference`] value and
 `estimator` an [`IgciEstimator`] value.

 # Safety
 `pair` must be a live handle and `out` writable.
 */
IgciStatus igci_score(const struct IgciPair *pair,
                      int32_t reference,
                      int32_t estimator,
                      struct IgciReport *out);

/*
 Spacing estimate of the differential entropy of `values`, in nats.

 # Safety
 `values` must point to `len` readable doubles and `out` be writable.
 */
IgciStatus igci_spacing_entropy(const double *values, uintptr_t len, double *out);

/*
 Mean log-slope of `y` against `x` after sorting by `x`.

 # Safety
 `x` and `y` must each point to `len` readable doubles and `out` be writable.
 */
IgciStatus igci_slope_criterion(const double *x, const double *y, uintptr_t len, double *out);

/*
 The digamma function for positive finite `x`.

 # Safety
 `out` must be writable.
 */
IgciStatus igci_digamma(double x, double *out);

/*
 Searches shifts of `b` against `a` up to `max_lag` for the largest correlation.

 # Safety
 `a` and `b` must point to `a_len` and `b_len` readable doubles and `out` be writable.
 */
IgciStatus igci_align_lag(const double *a,
                          uintptr_t a_len,
                          const double *b,
                          uintptr_t b_len,
                          uintptr_t max_lag,
                          struct IgciLagAlignment *out);

/*
 Message for the most recent failure on this thread, or null if the last
 call succeeded. The pointer stays valid until the next call into the
 library from the same thread.
 */
const char *igci_last_error_message(void);

/*
 Static name of an [`IgciStatus`] value; unknown values give "unknown".
 */
const char *igci_status_name(int32_t status);

/*
 Library version as a static NUL-terminated string.
 */
const char *igci_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IGCI_H */
