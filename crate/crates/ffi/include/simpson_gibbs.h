#ifndef SIMPSON_GIBBS_H
#define SIMPSON_GIBBS_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER = 1,
  SG_STATUS_INVALID_MODEL = 2,
  SG_STATUS_INVALID_SAMPLE = 3,
  SG_STATUS_DOMAIN = 4,
  SG_STATUS_BUFFER_TOO_SMALL = 5,
  SG_STATUS_SIMULATION = 6,
  SG_STATUS_PANIC = 7,
} SgStatus;

typedef enum SgVariant {
  SG_VARIANT_POISSON_DIRICHLET = 0,
  SG_VARIANT_EWENS = 1,
  SG_VARIANT_STABLE = 2,
  SG_VARIANT_FISHER = 3,
} SgVariant;

/**
 * Opaque validated model.
 */
typedef struct SgModel SgModel;

/**
 * Opaque sample summary.
 */
typedef struct SgSample SgSample;

/**
 * Mean and variance of Simpson's evenness index.
 */
typedef struct SgMoments {
  double mean;
  double variance;
} SgMoments;

/**
 * Monte Carlo moments with standard errors.
 */
typedef struct SgMcResult {
  double mean;
  double mean_std_error;
  double variance;
  double variance_std_error;
  double residual_bound;
  uint64_t draws;
} SgMcResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sg_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sg_version(void);

/**
 * Validates a model. Pass NaN for `alpha`/`theta` and 0 for `xi` to leave
 * them unspecified (e.g. `theta` for Stable, `xi` unless `alpha < 0`).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SgStatus sg_model_new(enum SgVariant variant,
                           double alpha,
                           double theta,
                           uint64_t xi,
                           struct SgModel **out);

/**
 * # Safety
 * `model` must come from `sg_model_new` and not be freed twice. Null is a no-op.
 */
void sg_model_free(struct SgModel *model);

/**
 * Writes the normalized PD parameters of a model.
 *
 * # Safety
 * All pointers must be valid; `xi` receives 0 when the model has no ξ.
 */
enum SgStatus sg_model_params(const struct SgModel *model,
                              double *alpha,
                              double *theta,
                              uint64_t *xi);

/**
 * Builds a sample from `len` species counts (each at least one). `counts`
 * may be null when `len` is zero.
 *
 * # Safety
 * `counts` must point to `len` readable values; `out` must be writable.
 */
enum SgStatus sg_sample_new(const uint64_t *counts, uintptr_t len, struct SgSample **out);

/**
 * # Safety
 * `sample` must come from `sg_sample_new` and not be freed twice. Null is a no-op.
 */
void sg_sample_free(struct SgSample *sample);

/**
 * Total observations; 0 for a null handle.
 *
 * # Safety
 * `sample` must be null or a live handle.
 */
uint64_t sg_sample_n(const struct SgSample *sample);

/**
 * Distinct species; 0 for a null handle.
 *
 * # Safety
 * `sample` must be null or a live handle.
 */
uint64_t sg_sample_k(const struct SgSample *sample);

/**
 * Closed-form prior mean and variance of `H_S`.
 *
 * # Safety
 * `model` must be a live handle and `out` writable.
 */
enum SgStatus sg_prior_evenness(const struct SgModel *model, struct SgMoments *out);

/**
 * Closed-form posterior mean and variance of `H_S` (prior for an empty sample).
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum SgStatus sg_posterior_evenness(const struct SgModel *model,
                                    const struct SgSample *sample,
                                    struct SgMoments *out);

/**
 * Natural log of the partition probability of the sample.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum SgStatus sg_log_eppf(const struct SgModel *model, const struct SgSample *sample, double *out);

/**
 * Writes `P(K_m = j)` for `j = 0..=m` into `probs`, which must hold at
 * least `m + 1` values; `expected` (optional) receives `E[K_m]`.
 *
 * # Safety
 * Handles must be live; `probs` must point to `capacity` writable values.
 */
enum SgStatus sg_richness_predictive(const struct SgModel *model,
                                     const struct SgSample *sample,
                                     uint64_t m,
                                     double *probs,
                                     uintptr_t capacity,
                                     double *expected);

/**
 * Monte Carlo moments of `H_S`; pass a null `sample` for the prior.
 * Non-positive `tol` or zero `max_sticks` select the library defaults.
 *
 * # Safety
 * `model` must be live, `sample` null or live, `out` writable.
 */
enum SgStatus sg_mc_evenness(const struct SgModel *model,
                             const struct SgSample *sample,
                             uint64_t draws,
                             double tol,
                             uint64_t seed,
                             uintptr_t max_sticks,
                             struct SgMcResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIMPSON_GIBBS_H */
