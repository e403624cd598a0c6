#ifndef POLYBM_POLYBM_H
#define POLYBM_POLYBM_H

/* C interface to libpolybm. Every call returns a polybm_status; on failure
 * polybm_last_error() describes the problem (per thread). Handles are
 * opaque and must be released with the matching _free function. */

#include <stddef.h>
#include <stdint.h>

#if defined(POLYBM_BUILDING_LIBRARY)
#define POLYBM_API __attribute__((visibility("default")))
#else
#define POLYBM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum polybm_status {
    POLYBM_OK = 0,
    POLYBM_INVALID_ARGUMENT = 1,
    POLYBM_OUT_OF_RANGE = 2,
    POLYBM_NUMERICAL = 3,
    POLYBM_INTERNAL = 4
} polybm_status;

typedef enum polybm_scheme {
    POLYBM_SCHEME_LOG_ODE = 0,
    POLYBM_SCHEME_PARABOLA = 1,
    POLYBM_SCHEME_LINEAR = 2,
    POLYBM_SCHEME_MILSTEIN = 3,
    POLYBM_SCHEME_EULER = 4
} polybm_scheme;

typedef enum polybm_metric { POLYBM_METRIC_STRONG = 0, POLYBM_METRIC_WEAK = 1 } polybm_metric;

typedef struct polybm_basis polybm_basis;
typedef struct polybm_stream polybm_stream;
typedef struct polybm_report polybm_report;

typedef struct polybm_pair {
    double w;
    double h_area;
    double length;
} polybm_pair;

typedef struct polybm_igbm_params {
    double a;
    double b;
    double sigma;
    double y0;
    double horizon;
} polybm_igbm_params;

typedef struct polybm_triple_integrals {
    double i_wt;
    double i_tw;
    double i_wwt;
    double i_wtw;
    double i_tww;
} polybm_triple_integrals;

#define POLYBM_MAX_SCHEMES 5
#define POLYBM_MAX_STEP_COUNTS 32

typedef struct polybm_experiment_config {
    polybm_igbm_params params;
    size_t num_schemes;
    polybm_scheme schemes[POLYBM_MAX_SCHEMES];
    size_t num_step_counts;
    int step_counts[POLYBM_MAX_STEP_COUNTS];
    size_t num_paths;
    uint64_t seed;
    int fine_substeps; /* 0: standard rule */
    unsigned workers;
} polybm_experiment_config;

typedef struct polybm_error_row {
    polybm_scheme scheme;
    int steps;
    double h;
    double error;
    double std_err;
} polybm_error_row;

typedef struct polybm_slope_row {
    polybm_scheme scheme;
    polybm_metric metric;
    double slope;
    double intercept;
    double slope_stderr;
} polybm_slope_row;

typedef struct polybm_check_result {
    char name[64];
    int passed;
    char detail[192];
} polybm_check_result;

POLYBM_API const char* polybm_last_error(void);
POLYBM_API const char* polybm_version(void);

/* Orthogonal polynomials */
POLYBM_API polybm_status polybm_legendre(int k, double x, double* out);
POLYBM_API polybm_status polybm_jacobi_m1m1(int k, double x, double* out);
POLYBM_API polybm_status polybm_eigenfunction(int k, double t, double* out);
POLYBM_API polybm_status polybm_eigenvalue(int k, double* out);
/* n nodes and weights on [-1,1], ascending. */
POLYBM_API polybm_status polybm_gauss_legendre(int n, double* nodes, double* weights);

POLYBM_API polybm_status polybm_basis_new(int max_degree, polybm_basis** out);
POLYBM_API void polybm_basis_free(polybm_basis* basis);
POLYBM_API polybm_status polybm_basis_max_degree(const polybm_basis* basis, int* out);
POLYBM_API polybm_status polybm_basis_eval(const polybm_basis* basis, int k, double t, double* out);
POLYBM_API polybm_status polybm_basis_inner_product(const polybm_basis* basis, int i, int j,
                                                    double* out);

/* Random streams and Brownian data */
POLYBM_API polybm_status polybm_stream_new(uint64_t seed, uint64_t stream, uint64_t substream,
                                           polybm_stream** out);
POLYBM_API void polybm_stream_free(polybm_stream* stream);
POLYBM_API polybm_status polybm_stream_normal(polybm_stream* stream, double* out);

POLYBM_API polybm_status polybm_sample_pairs(polybm_stream* stream, double length, size_t count,
                                             polybm_pair* out);
POLYBM_API polybm_status polybm_coarsen(const polybm_pair* pairs, size_t count, polybm_pair* out);
POLYBM_API polybm_status polybm_parabola_eval(double start_value, const polybm_pair* pair, double u,
                                              double* out);
POLYBM_API polybm_status polybm_arch_covariance(double s, double t, double* out);

/* Degree-n polynomial path: w1 plus I_1..I_{n-1} written to coeffs
 * (capacity n-1). */
POLYBM_API polybm_status polybm_sample_kl(const polybm_basis* basis, polybm_stream* stream, int n,
                                          double* w1, double* coeffs);
POLYBM_API polybm_status polybm_eval_kl(const polybm_basis* basis, double w1, const double* coeffs,
                                        int n, double t, double* out);

/* Conditional moments and triple integrals */
POLYBM_API polybm_status polybm_cond_mean_sq_integral(const polybm_pair* pair, double* out);
POLYBM_API polybm_status polybm_cond_mean_L(const polybm_pair* pair, double* out);
POLYBM_API polybm_status polybm_cond_var_L(const polybm_pair* pair, double* out);
POLYBM_API polybm_status polybm_triple_integrals_from_whl(double w, double h_area, double l_area,
                                                          double h, polybm_triple_integrals* out);

/* IGBM schemes */
POLYBM_API polybm_igbm_params polybm_igbm_default_params(void);
POLYBM_API const char* polybm_scheme_name(polybm_scheme scheme);
POLYBM_API polybm_status polybm_scheme_parse(const char* name, polybm_scheme* out);
POLYBM_API polybm_status polybm_igbm_step(polybm_scheme scheme, const polybm_igbm_params* params,
                                          double y, const polybm_pair* pair, double* out);
POLYBM_API polybm_status polybm_igbm_simulate(polybm_scheme scheme, const polybm_igbm_params* params,
                                              const polybm_pair* pairs, size_t count, double* out);
/* Writes count + 1 values Y_0..Y_N. */
POLYBM_API polybm_status polybm_igbm_trajectory(polybm_scheme scheme,
                                                const polybm_igbm_params* params,
                                                const polybm_pair* pairs, size_t count,
                                                double* out);

/* Convergence experiments */
POLYBM_API polybm_experiment_config polybm_experiment_default_config(void);
POLYBM_API polybm_status polybm_experiment_run(const polybm_experiment_config* config,
                                               polybm_report** out);
POLYBM_API void polybm_report_free(polybm_report* report);
POLYBM_API size_t polybm_report_strong_count(const polybm_report* report);
POLYBM_API size_t polybm_report_weak_count(const polybm_report* report);
POLYBM_API size_t polybm_report_slope_count(const polybm_report* report);
POLYBM_API polybm_status polybm_report_strong(const polybm_report* report, size_t i,
                                              polybm_error_row* out);
POLYBM_API polybm_status polybm_report_weak(const polybm_report* report, size_t i,
                                            polybm_error_row* out);
POLYBM_API polybm_status polybm_report_slope(const polybm_report* report, size_t i,
                                             polybm_slope_row* out);

/* Invariant suites */
POLYBM_API size_t polybm_check_count(void);
/* Runs all suites; writes up to capacity results, *written receives the
 * number written. Returns POLYBM_OK even when suites fail. */
POLYBM_API polybm_status polybm_check_run(polybm_check_result* results, size_t capacity,
                                          size_t* written);

#ifdef __cplusplus
}
#endif

#endif
