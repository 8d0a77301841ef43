/*
 * momentcone C API.
 *
 * Objects are opaque handles created by *_parse / *_create functions and
 * released with the matching *_free. Every fallible call returns an
 * mc_status; on failure mc_last_error() describes the problem (the message is
 * thread-local and stays valid until the next failing call on that thread).
 *
 * Functions that produce reports write a NUL-terminated JSON document into
 * *report, owned by the caller and released with mc_string_free.
 */
#ifndef MOMENTCONE_H
#define MOMENTCONE_H

#include <stddef.h>

#if defined(_WIN32)
#  define MC_API __declspec(dllexport)
#else
#  define MC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mc_status {
  MC_OK = 0,
  MC_ERR_INVALID_ARGUMENT = 1,
  MC_ERR_DIMENSION_MISMATCH = 2,
  MC_ERR_DOMAIN = 3,
  MC_ERR_INSUFFICIENT_MOMENTS = 4,
  MC_ERR_PARSE = 5,
  MC_ERR_INTERNAL = 99
} mc_status;

typedef struct mc_polynomial mc_polynomial;
typedef struct mc_moments mc_moments;
typedef struct mc_measure mc_measure;
typedef struct mc_weight mc_weight;

/* Tuning shared by the SOS routines; NULL selects the defaults. */
typedef struct mc_sos_options {
  double tol;                  /* coefficient residual, default 1e-8 */
  int max_iters;               /* alternating projection cap, default 5000 */
  unsigned long long seed;     /* multistart screen seed, default 0 */
} mc_sos_options;

MC_API const char* mc_version(void);
MC_API const char* mc_last_error(void);
MC_API void mc_string_free(char* s);
MC_API mc_sos_options mc_sos_options_default(void);

/* Polynomials: {"n": int, "terms": [{"exp": [...], "coef": number}, ...]} */
MC_API mc_status mc_polynomial_parse(const char* json, mc_polynomial** out);
MC_API mc_status mc_polynomial_to_json(const mc_polynomial* f, char** out);
MC_API void mc_polynomial_free(mc_polynomial* f);
MC_API size_t mc_polynomial_dim(const mc_polynomial* f);
MC_API int mc_polynomial_degree(const mc_polynomial* f);
MC_API mc_status mc_polynomial_eval(const mc_polynomial* f, const double* x, size_t n,
                                    double* out);

/* Weights: p is "inf", an integer, a decimal or "a/b"; r has n positive entries. */
MC_API mc_status mc_weight_create(const char* p, const double* r, size_t n, mc_weight** out);
MC_API void mc_weight_free(mc_weight* w);
MC_API size_t mc_weight_dim(const mc_weight* w);

MC_API mc_status mc_weighted_norm(const mc_polynomial* s, const mc_weight* w, double* out);
/* *out is +inf when the dual-space norm of (x^a)_a diverges. */
MC_API mc_status mc_eval_sequence_norm(const double* x, size_t n, const mc_weight* w,
                                       double* out);
MC_API mc_status mc_is_evaluation_continuous(const double* x, size_t n, const mc_weight* w,
                                             int* out);

/* Moments: {"n", "max_degree", "values": [{"exp": [...], "s": number}, ...]} */
MC_API mc_status mc_moments_parse(const char* json, mc_moments** out);
MC_API mc_status mc_moments_to_json(const mc_moments* s, char** out);
MC_API void mc_moments_free(mc_moments* s);
MC_API size_t mc_moments_dim(const mc_moments* s);
MC_API int mc_moments_max_degree(const mc_moments* s);

/* Measures: {"n", "atoms": [[...], ...], "weights": [...]} */
MC_API mc_status mc_measure_parse(const char* json, mc_measure** out);
MC_API void mc_measure_free(mc_measure* mu);
MC_API mc_status mc_moments_of_measure(const mc_measure* mu, int max_degree, mc_moments** out);

/* d < 0 uses max_degree/2; tol <= 0 uses the scale-aware default. */
MC_API mc_status mc_psd_check(const mc_moments* s, int d, double tol, char** report,
                              int* passed);
MC_API mc_status mc_qm_check(const mc_moments* s, const mc_polynomial* const* generators,
                             size_t count, double archimedean_bound, int d, double tol,
                             char** report, int* passed);
/* *bounded is 0 when the truncated dual-norm profile keeps growing. */
MC_API mc_status mc_dual_norm(const mc_moments* s, const mc_weight* w, char** report,
                              int* bounded);

MC_API mc_status mc_sqrt_approx(const mc_polynomial* f, int i, char** report);
MC_API mc_status mc_sos_approx(const mc_polynomial* f, const mc_weight* w, double epsilon,
                               int d_max, const mc_sos_options* options, char** report,
                               int* certified);
/* epsilons must be strictly decreasing; *all_certified covers every run. */
MC_API mc_status mc_convergence_sweep(const mc_polynomial* f, const mc_weight* w,
                                      const double* epsilons, size_t count, int d_max,
                                      const mc_sos_options* options, char** report,
                                      int* all_certified);

/* Recovery box comes from the weight (box_from_weight). */
MC_API mc_status mc_recover_measure(const mc_moments* s, const mc_weight* w, int grid,
                                    double tol, char** report, int* success);
/* box_weight may be NULL to skip the containment check. */
MC_API mc_status mc_verify_representation(const mc_moments* s, const mc_measure* mu,
                                          const mc_weight* box_weight, char** report);

/* Dual-norm hypothesis, PSD check (plus localized checks when count > 0) and
 * recovery on the weight's box, chained into one report. */
MC_API mc_status mc_pipeline(const mc_moments* s, const mc_polynomial* const* generators,
                             size_t count, double archimedean_bound, const mc_weight* w, int d,
                             int grid, double tol, char** report, int* passed);

#ifdef __cplusplus
}
#endif

#endif /* MOMENTCONE_H */
