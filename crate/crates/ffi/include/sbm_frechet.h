#ifndef SBM_FRECHET_H
#define SBM_FRECHET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SbmStatus {
  SBM_STATUS_OK = 0,
  SBM_STATUS_NULL_POINTER = 1,
  SBM_STATUS_INVALID_ARGUMENT = 2,
  SBM_STATUS_BUFFER_TOO_SMALL = 3,
  SBM_STATUS_DISCONNECTED = 4,
  SBM_STATUS_SINGULAR = 5,
  SBM_STATUS_NOT_REALIZABLE = 6,
  SBM_STATUS_TOO_LARGE = 7,
  SBM_STATUS_INTERNAL = 8,
} SbmStatus;

/**
 * A resistance barycenter and its reconstructed adjacency.
 */
typedef struct SbmBarycenter SbmBarycenter;

/**
 * A sample of binary networks on a common vertex set.
 */
typedef struct SbmSample SbmSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *sbm_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *sbm_version(void);

/**
 * Draws `count` networks from G(n, p, q) with the given seed.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SbmStatus sbm_sample_new(size_t n,
                              double p,
                              double q,
                              size_t count,
                              uint64_t seed,
                              struct SbmSample **out);

/**
 * Builds a sample from `count` row-major `n * n` 0/1 matrices stored back to back.
 *
 * # Safety
 * `data` must point to `count * n * n` readable bytes; `out` as in [`sbm_sample_new`].
 */
enum SbmStatus sbm_sample_from_adjacency(size_t n,
                                         size_t count,
                                         const uint8_t *data,
                                         struct SbmSample **out);

/**
 * # Safety
 * `sample` must be null or a handle from this library that was not yet freed.
 */
void sbm_sample_free(struct SbmSample *sample);

/**
 * Vertex count of the sample, or 0 for a null handle.
 *
 * # Safety
 * `sample` must be null or a live handle.
 */
size_t sbm_sample_n(const struct SbmSample *sample);

/**
 * Number of networks in the sample, or 0 for a null handle.
 *
 * # Safety
 * `sample` must be null or a live handle.
 */
size_t sbm_sample_len(const struct SbmSample *sample);

/**
 * Copies network `k` into `out` as a row-major 0/1 matrix.
 *
 * # Safety
 * `sample` must be a live handle; `out` must hold `len` writable bytes.
 */
enum SbmStatus sbm_sample_network(const struct SbmSample *sample,
                                  size_t k,
                                  uint8_t *out,
                                  size_t len);

/**
 * Writes the majority-rule median of the sample into `out`.
 *
 * # Safety
 * `sample` must be a live handle; `out` must hold `len` writable bytes.
 */
enum SbmStatus sbm_majority_median(const struct SbmSample *sample, uint8_t *out, size_t len);

/**
 * Hamming distance between two row-major 0/1 matrices.
 *
 * # Safety
 * `a` and `b` must point to `n * n` readable bytes; `out` to one writable `u64`.
 */
enum SbmStatus sbm_hamming(size_t n, const uint8_t *a, const uint8_t *b, uint64_t *out);

/**
 * Effective resistance matrix of a connected weighted graph.
 *
 * # Safety
 * `a` must point to `n * n` readable doubles; `out` to `len` writable doubles.
 */
enum SbmStatus sbm_effective_resistance(size_t n, const double *a, double *out, size_t len);

/**
 * Squared resistance-perturbation distance between two connected weighted graphs.
 *
 * # Safety
 * `a` and `b` must point to `n * n` readable doubles; `out` to one writable double.
 */
enum SbmStatus sbm_resistance_distance_sq(size_t n, const double *a, const double *b, double *out);

/**
 * Resistance barycenter of a sample, reconstructed with regularization `alpha`.
 *
 * # Safety
 * `sample` must be a live handle; `out` valid storage for one handle.
 */
enum SbmStatus sbm_barycenter_new(const struct SbmSample *sample,
                                  double alpha,
                                  struct SbmBarycenter **out);

/**
 * # Safety
 * `barycenter` must be null or a handle from this library that was not yet freed.
 */
void sbm_barycenter_free(struct SbmBarycenter *barycenter);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `barycenter` must be null or a live handle.
 */
size_t sbm_barycenter_n(const struct SbmBarycenter *barycenter);

/**
 * Largest entrywise error of the resistance round trip, or NaN for a null handle.
 *
 * # Safety
 * `barycenter` must be null or a live handle.
 */
double sbm_barycenter_round_trip_residual(const struct SbmBarycenter *barycenter);

/**
 * Copies the reconstructed weighted adjacency (row-major) into `out`.
 *
 * # Safety
 * `barycenter` must be a live handle; `out` must hold `len` writable doubles.
 */
enum SbmStatus sbm_barycenter_adjacency(const struct SbmBarycenter *barycenter,
                                        double *out,
                                        size_t len);

/**
 * Copies the mean resistance matrix (row-major) into `out`.
 *
 * # Safety
 * `barycenter` must be a live handle; `out` must hold `len` writable doubles.
 */
enum SbmStatus sbm_barycenter_mean_resistance(const struct SbmBarycenter *barycenter,
                                              double *out,
                                              size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SBM_FRECHET_H */
