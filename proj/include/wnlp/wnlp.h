/* C interface to the weighted Lp numerics library.
 *
 * Matrices cross the boundary as row-major arrays of interleaved (re, im)
 * doubles of length 2*n*n. p = INFINITY selects the operator norm. Every
 * function returns a wnlp_status; on failure wnlp_last_error() describes it.
 */
#ifndef WNLP_H
#define WNLP_H

#include <stddef.h>
#include <stdint.h>

#if defined(WNLP_BUILDING_LIBRARY)
#define WNLP_API __attribute__((visibility("default")))
#else
#define WNLP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wnlp_status {
  WNLP_OK = 0,
  WNLP_INVALID_ARGUMENT = 1,
  WNLP_DIMENSION_MISMATCH = 2,
  WNLP_NOT_HERMITIAN = 3,
  WNLP_NON_MONOTONE = 4,
  WNLP_DEGENERATE = 5,
  WNLP_NON_CONVERGENCE = 6,
  WNLP_CONFIG = 7,
  WNLP_IO = 8,
  WNLP_INTERNAL = 99
} wnlp_status;

typedef struct wnlp_density wnlp_density;
typedef struct wnlp_kernel wnlp_kernel;
typedef struct wnlp_report wnlp_report;

typedef enum wnlp_weighted_kind {
  WNLP_TWO_SIDED = 0,
  WNLP_RIGHT_ONLY = 1,
  WNLP_LEFT_ONLY = 2,
  WNLP_DELTA_MAX = 3
} wnlp_weighted_kind;

typedef struct wnlp_cb_certificate {
  double lower;
  double upper;
  int iterations;
  int converged;
  int used_fallback;
} wnlp_cb_certificate;

typedef struct wnlp_sandwich {
  double p;
  double exact;
  double upper;
  double lower;
  double upper_ratio;
  double lower_ratio;
  double budget;
  int passed;
} wnlp_sandwich;

typedef struct wnlp_run_options {
  int has_seed;
  uint64_t seed;
  int quick;
  const char* out_dir; /* NULL: no files written */
} wnlp_run_options;

WNLP_API const char* wnlp_version(void);
/* Message for the last failure on the calling thread; never NULL. */
WNLP_API const char* wnlp_last_error(void);

WNLP_API wnlp_status wnlp_schatten_norm(const double* x, int n, double p, double* out);

/* Hermitian positive definite h, interleaved complex. */
WNLP_API wnlp_status wnlp_density_create(const double* h, int n, wnlp_density** out);
WNLP_API wnlp_status wnlp_density_diagonal(const double* values, int n, wnlp_density** out);
WNLP_API void wnlp_density_free(wnlp_density* d);
WNLP_API int wnlp_density_dim(const wnlp_density* d);
/* Ascending eigenvalues into values[0..n). */
WNLP_API wnlp_status wnlp_density_eigenvalues(const wnlp_density* d, double* values);
/* d^alpha. */
WNLP_API wnlp_status wnlp_density_power(const wnlp_density* d, double alpha, wnlp_density** out);

WNLP_API wnlp_status wnlp_weighted_norm(const double* x, const wnlp_density* d, double p,
                                        wnlp_weighted_kind kind, double* out);
WNLP_API wnlp_status wnlp_geo_mean_map(const wnlp_density* d, const double* x, double* out);
WNLP_API wnlp_status wnlp_sigma_inverse(const wnlp_density* d, const double* y, double* out);
/* Ratio for the upper (plus != 0) or lower triangular part; *defined = 0 when it vanishes. */
WNLP_API wnlp_status wnlp_compa_ratio(const double* x, const wnlp_density* d, double alpha, double p,
                                      int plus, double* out, int* defined);

/* Family names as in the report: MinOverMax, TwoWeightMean, ... mu may be NULL. */
WNLP_API wnlp_status wnlp_kernel_create(const char* family, const double* lambda, const double* mu, int n,
                                        double theta, wnlp_kernel** out);
/* Real row-major n*n entries. */
WNLP_API wnlp_status wnlp_kernel_from_real(const double* entries, int n, wnlp_kernel** out);
WNLP_API void wnlp_kernel_free(wnlp_kernel* k);
WNLP_API int wnlp_kernel_dim(const wnlp_kernel* k);
WNLP_API wnlp_status wnlp_kernel_entry(const wnlp_kernel* k, int i, int j, double* re, double* im);
WNLP_API wnlp_status wnlp_kernel_claimed_bound(const wnlp_kernel* k, double* out);
WNLP_API wnlp_status wnlp_kernel_apply(const wnlp_kernel* k, const double* x, double* out);
WNLP_API wnlp_status wnlp_kernel_norm_lower(const wnlp_kernel* k, double p, int trials, uint64_t seed,
                                            double* out);
/* tol <= 0 uses the default gap. */
WNLP_API wnlp_status wnlp_kernel_cb_norm(const wnlp_kernel* k, double tol, wnlp_cb_certificate* out);

WNLP_API wnlp_status wnlp_gmean_ft(double theta, double xi, double* re, double* im);
/* L1 norm of the transform of the g-mean kernel with its error bar. */
WNLP_API wnlp_status wnlp_gmean_l1(double theta, double* value, double* error);

/* Couple (d^alpha0, d^alpha1) with exponents (p0, p1) at theta. iterations <= 0 uses the default. */
WNLP_API wnlp_status wnlp_sandwich_verify(const double* x, const wnlp_density* d, double alpha0, double alpha1,
                                          double p0, double p1, double theta, double budget_factor,
                                          int iterations, wnlp_sandwich* out);

/* config_json may be NULL (defaults for the named experiment) and then experiment must be set.
 * When both are given the experiment argument overrides the config. */
WNLP_API wnlp_status wnlp_run_experiment(const char* experiment, const char* config_json,
                                         const wnlp_run_options* options, wnlp_report** out);
WNLP_API void wnlp_report_free(wnlp_report* r);
WNLP_API int wnlp_report_exit_code(const wnlp_report* r);
WNLP_API int wnlp_report_cases(const wnlp_report* r);
WNLP_API int wnlp_report_violations(const wnlp_report* r);
WNLP_API double wnlp_report_max_ratio(const wnlp_report* r);
/* Owned by the report; valid until wnlp_report_free. */
WNLP_API const char* wnlp_report_summary(const wnlp_report* r);
WNLP_API const char* wnlp_report_json(const wnlp_report* r);
WNLP_API const char* wnlp_report_csv(const wnlp_report* r);
/* Value of the first case whose id starts with prefix. */
WNLP_API wnlp_status wnlp_report_case_value(const wnlp_report* r, const char* prefix, double* value, double* bound,
                                            int* passed);

#ifdef __cplusplus
}
#endif

#endif
