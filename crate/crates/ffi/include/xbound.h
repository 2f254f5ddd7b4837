#ifndef XBOUND_H
#define XBOUND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum XbStatus {
  XB_STATUS_OK = 0,
  XB_STATUS_NULL_POINTER = 1,
  XB_STATUS_INVALID_ARGUMENT = 2,
  XB_STATUS_NOT_HERMITIAN = 3,
  XB_STATUS_TRACE_NOT_ONE = 4,
  XB_STATUS_NOT_POSITIVE = 5,
  XB_STATUS_WRONG_DIMENSIONS = 6,
  XB_STATUS_OUT_OF_RANGE = 7,
  XB_STATUS_INDEX_OUT_OF_RANGE = 8,
  XB_STATUS_INVARIANT_VIOLATION = 9,
  XB_STATUS_PARSE_ERROR = 10,
  XB_STATUS_PANIC = 11,
} XbStatus;

/*
 Opaque validated density matrix.
 */
typedef struct XbDensity XbDensity;

typedef struct XbBoundReport {
  double c1;
  double c2;
  double bound;
  /*
   NaN when no exact value is known.
   */
  double exact;
} XbBoundReport;

typedef struct XbGeneralizedBound {
  double bound;
  double best;
  /*
   False when the state has no index pairs (a local dimension of 1).
   */
  bool has_pair;
  size_t i;
  size_t j;
  size_t k;
  size_t l;
  /*
   0 = direct, 1 = mirrored.
   */
  uint32_t orientation;
} XbGeneralizedBound;

typedef struct XbCertificate {
  double c1;
  bool entangled;
} XbCertificate;

typedef struct XbBasisOptimum {
  double original_bound;
  double best_bound;
  double exact;
  /*
   ZYZ Euler angles of uA then uB.
   */
  double angles[6];
} XbBasisOptimum;

typedef struct XbFuzzReport {
  size_t trials;
  size_t violations;
  double max_gap;
  double min_slack;
  size_t pure_checks;
  size_t pure_violations;
} XbFuzzReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL. Valid until the
 next failing call on the same thread.
 */
const char *xb_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *xb_version(void);

/*
 Validates a `(dim_a*dim_b)^2` row-major matrix given as separate real and
 imaginary arrays.

 # Safety
 `re` and `im` must each point to `(dim_a*dim_b)^2` doubles; `out` must be
 writable.
 */
enum XbStatus xb_density_new(size_t dim_a,
                             size_t dim_b,
                             const double *re,
                             const double *im,
                             struct XbDensity **out);

/*
 Parses the JSON density-matrix format.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum XbStatus xb_density_from_json(const char *json, struct XbDensity **out);

/*
 # Safety
 `out` must be writable.
 */
enum XbStatus xb_density_isotropic(size_t d, double fidelity, struct XbDensity **out);

/*
 # Safety
 `out` must be writable.
 */
enum XbStatus xb_density_werner(double p, struct XbDensity **out);

/*
 Random state of the given rank; deterministic in `seed`.

 # Safety
 `out` must be writable.
 */
enum XbStatus xb_density_random(size_t dim_a,
                                size_t dim_b,
                                size_t rank,
                                uint64_t seed,
                                struct XbDensity **out);

/*
 Releases a handle. NULL is ignored.

 # Safety
 `h` must come from an `xb_density_*` constructor and not be freed twice.
 */
void xb_density_free(struct XbDensity *h);

/*
 # Safety
 `h` must be a live handle; `dim_a`, `dim_b` writable.
 */
enum XbStatus xb_density_dims(const struct XbDensity *h, size_t *dim_a, size_t *dim_b);

/*
 Two-qubit X bound with the exact (Wootters) concurrence attached.

 # Safety
 `h` must be a live handle; `out` writable.
 */
enum XbStatus xb_x_lower_bound(const struct XbDensity *h, struct XbBoundReport *out);

/*
 # Safety
 `h` must be a live handle; `out` writable.
 */
enum XbStatus xb_wootters_concurrence(const struct XbDensity *h, double *out);

/*
 # Safety
 `h` must be a live handle; `out` writable.
 */
enum XbStatus xb_generalized_lower_bound(const struct XbDensity *h, struct XbGeneralizedBound *out);

/*
 Signed `C_{ik,jl}`; `mirrored` swaps the roles of `k` and `l`.

 # Safety
 `h` must be a live handle; `out` writable.
 */
enum XbStatus xb_pair_bound(const struct XbDensity *h,
                            size_t i,
                            size_t j,
                            size_t k,
                            size_t l,
                            bool mirrored,
                            double *out);

/*
 # Safety
 `out` must be writable.
 */
enum XbStatus xb_certify_from_elements(double q14_abs,
                                       double d22,
                                       double d33,
                                       struct XbCertificate *out);

/*
 # Safety
 `out` must be writable.
 */
enum XbStatus xb_isotropic_exact_concurrence(size_t d, double fidelity, double *out);

/*
 # Safety
 `out` must be writable.
 */
enum XbStatus xb_isotropic_bound(size_t d, double fidelity, double *out);

/*
 Upper bound on the concurrence from the convex-roof search.

 # Safety
 `h` must be a live handle; `out` writable.
 */
enum XbStatus xb_convex_roof_upper(const struct XbDensity *h,
                                   size_t restarts,
                                   size_t max_iters,
                                   uint64_t seed,
                                   double *out);

/*
 # Safety
 `h` must be a live handle; `out` writable.
 */
enum XbStatus xb_optimize_basis(const struct XbDensity *h,
                                size_t restarts,
                                size_t max_iters,
                                uint64_t seed,
                                struct XbBasisOptimum *out);

/*
 Randomized check of `bound <= concurrence`.

 # Safety
 `out` must be writable.
 */
enum XbStatus xb_fuzz_inequality(size_t trials,
                                 size_t dim_a,
                                 size_t dim_b,
                                 uint64_t seed,
                                 struct XbFuzzReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* XBOUND_H */
