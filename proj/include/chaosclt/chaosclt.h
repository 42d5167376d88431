/* Stable C interface to the chaosclt numerics library.
 *
 * Every fallible call returns a cclt_status. On failure the message of the
 * most recent error on the calling thread is available from
 * cclt_last_error(). Objects are opaque and owned by the caller; release
 * them with the matching *_free function. */
#ifndef CHAOSCLT_H
#define CHAOSCLT_H

#include <stddef.h>
#include <stdint.h>

#if defined(CHAOSCLT_BUILDING_LIBRARY)
#define CCLT_API __attribute__((visibility("default")))
#else
#define CCLT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cclt_status {
  CCLT_OK = 0,
  CCLT_ERR_VALIDATION = 1,  /* bad argument, malformed input, violated precondition */
  CCLT_ERR_NUMERICAL = 2,   /* e.g. negative mixed inner product, indefinite covariance */
  CCLT_ERR_UNSUPPORTED = 3, /* representation the operation cannot handle */
  CCLT_ERR_INTERNAL = 4
} cclt_status;

typedef struct cclt_kernel cclt_kernel;
typedef struct cclt_chaos cclt_chaos;
typedef struct cclt_result cclt_result;

CCLT_API const char* cclt_version(void);
CCLT_API const char* cclt_last_error(void);
CCLT_API void cclt_string_free(char* text);

/* ---- kernels ---- */

/* Dense tensor of the given order over R^dim; `values` holds dim^order
 * entries, row-major. */
CCLT_API cclt_status cclt_kernel_dense_create(int order, size_t dim, const double* values,
                                              size_t count, cclt_kernel** out);
/* sum_i coefficients[i] v_i^{(x) order}; v_i is row i of the terms x dim
 * row-major array `vectors`. */
CCLT_API cclt_status cclt_kernel_rank_one_create(int order, size_t dim, size_t terms,
                                                 const double* coefficients,
                                                 const double* vectors, int stationary,
                                                 cclt_kernel** out);
CCLT_API cclt_status cclt_kernel_parse(const char* text, cclt_kernel** out);
/* The returned text is released with cclt_string_free. */
CCLT_API cclt_status cclt_kernel_serialize(const cclt_kernel* kernel, char** out_text);
CCLT_API void cclt_kernel_free(cclt_kernel* kernel);

CCLT_API int cclt_kernel_order(const cclt_kernel* kernel);
CCLT_API size_t cclt_kernel_dim(const cclt_kernel* kernel);
CCLT_API cclt_status cclt_kernel_norm(const cclt_kernel* kernel, double* out);
/* ||f (x)_r f|| */
CCLT_API cclt_status cclt_kernel_contraction_norm(const cclt_kernel* kernel, int r, double* out);
/* <f_p (x) f_p, f_q (x)_{q-p} f_q> for q > p */
CCLT_API cclt_status cclt_kernel_mixed_inner(const cclt_kernel* fp, const cclt_kernel* fq,
                                             double* out);

/* ---- chaos sums ---- */

CCLT_API cclt_status cclt_chaos_create(size_t dim, cclt_chaos** out);
/* Copies the kernel; each chaos order may be added once. */
CCLT_API cclt_status cclt_chaos_add(cclt_chaos* chaos, const cclt_kernel* kernel);
CCLT_API void cclt_chaos_free(cclt_chaos* chaos);
CCLT_API cclt_status cclt_chaos_second_moment(const cclt_chaos* chaos, double* out);
/* F evaluated on the Gaussian vector z of length dim. */
CCLT_API cclt_status cclt_chaos_sample(const cclt_chaos* chaos, const double* z, size_t dim,
                                       double* out);
/* `replicas` draws into out[0..replicas); replica r uses substream r. */
CCLT_API cclt_status cclt_chaos_sample_batch(const cclt_chaos* chaos, size_t replicas,
                                             uint64_t seed, unsigned threads, double* out);
/* Bound decomposition as a JSON document (release with cclt_string_free). */
CCLT_API cclt_status cclt_chaos_bound_json(const cclt_chaos* chaos, double constant_multiplier,
                                           char** out_json);

/* ---- experiments ---- */

/* kind: "rates", "bound", "ratio" or "diagnose-nz"; NULL takes the kind from
 * the config. Relative kernel paths resolve against base_dir (NULL: "."). */
CCLT_API cclt_status cclt_experiment_run(const char* kind, const char* config_json,
                                         const char* base_dir, cclt_result** out);
CCLT_API size_t cclt_result_file_count(const cclt_result* result);
CCLT_API const char* cclt_result_file_name(const cclt_result* result, size_t index);
CCLT_API const char* cclt_result_file_text(const cclt_result* result, size_t index);
/* output_dir from the config, after defaults. */
CCLT_API const char* cclt_result_output_dir(const cclt_result* result);
CCLT_API void cclt_result_free(cclt_result* result);

/* ---- scalar helpers ---- */

CCLT_API cclt_status cclt_fgn_covariance(double hurst, int64_t lag, double* out);
CCLT_API cclt_status cclt_fgn_rate(double hurst, int q, double* exponent, double* log_power);

#ifdef __cplusplus
}
#endif

#endif /* CHAOSCLT_H */
