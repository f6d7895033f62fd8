/* C interface to the common-atoms pairwise-dependent Dirichlet process
 * mixture sampler (CAPDDP) and its uncommon-atoms baseline (PDDP).
 *
 * Every function returns a capddp_status; on failure a description is
 * available from capddp_last_error() on the calling thread until the next
 * call into the library. Strings returned through char** out-parameters are
 * owned by the caller and released with capddp_free_string(). Group indices
 * are 0-based unless noted otherwise.
 */
#ifndef CAPDDP_CAPDDP_H
#define CAPDDP_CAPDDP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CAPDDP_BUILDING_LIBRARY)
#    define CAPDDP_API __declspec(dllexport)
#  else
#    define CAPDDP_API __declspec(dllimport)
#  endif
#else
#  define CAPDDP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum capddp_status {
    CAPDDP_OK = 0,
    CAPDDP_ERR_INVALID_ARGUMENT = 1,
    CAPDDP_ERR_CONFIG = 2,
    CAPDDP_ERR_IO = 3,
    CAPDDP_ERR_NUMERICAL = 4,
    CAPDDP_ERR_STATE = 5,
    CAPDDP_ERR_INTERNAL = 99
} capddp_status;

typedef enum capddp_variant {
    CAPDDP_VARIANT_COMMON_ATOMS = 0,   /* CAPDDP */
    CAPDDP_VARIANT_UNCOMMON_ATOMS = 1  /* PDDP */
} capddp_variant;

typedef struct capddp_model_params {
    size_t m;                       /* number of groups, >= 2 */
    double c;                       /* stick-breaking concentration */
    double s;                       /* prior precision of atom means */
    double eps;                     /* gamma shape = rate for atom precisions */
    const double* dirichlet_hyper;  /* m*m row-major; NULL means all ones */
    uint64_t seed;
    capddp_variant variant;
} capddp_model_params;

typedef struct capddp_sweep_info {
    uint64_t sweep;
    size_t max_occupied; /* M */
    size_t n_star;       /* N* */
    size_t clusters;
    double wall_seconds;
} capddp_sweep_info;

typedef struct capddp_sampler capddp_sampler;

CAPDDP_API const char* capddp_version(void);
CAPDDP_API const char* capddp_last_error(void);
CAPDDP_API void capddp_free_string(char* s);

/* Sampler handle ------------------------------------------------------- */

/* groups[j] points at group_sizes[j] observations, for j < params->m. The
 * data are copied. */
CAPDDP_API capddp_status capddp_sampler_create(const capddp_model_params* params,
                                               const double* const* groups,
                                               const size_t* group_sizes,
                                               capddp_sampler** out);
CAPDDP_API void capddp_sampler_destroy(capddp_sampler* sampler);

/* One full Gibbs sweep; info may be NULL. */
CAPDDP_API capddp_status capddp_sampler_sweep(capddp_sampler* sampler, capddp_sweep_info* info);
CAPDDP_API capddp_status capddp_sampler_info(const capddp_sampler* sampler, capddp_sweep_info* info);

/* m*m row-major selection probabilities. */
CAPDDP_API capddp_status capddp_sampler_selection_probs(const capddp_sampler* sampler, double* out,
                                                        size_t len);

/* Composite weights of one group on the shared atoms. *length receives N*;
 * when capacity < N* nothing is copied and CAPDDP_ERR_INVALID_ARGUMENT is
 * returned. CAPDDP states only. */
CAPDDP_API capddp_status capddp_sampler_composite_weights(const capddp_sampler* sampler, size_t group,
                                                          double* out, size_t capacity, size_t* length,
                                                          double* tail_mass);

/* Conditional L2 (unscaled sum of squared weight differences) and total
 * variation between two groups. CAPDDP states only. */
CAPDDP_API capddp_status capddp_sampler_l2_distance(const capddp_sampler* sampler, size_t a, size_t b,
                                                    double* out);
CAPDDP_API capddp_status capddp_sampler_tv_distance(const capddp_sampler* sampler, size_t a, size_t b,
                                                    double* out);

/* One predictive draw for `group`, using the sampler's generator. */
CAPDDP_API capddp_status capddp_sampler_predictive(capddp_sampler* sampler, size_t group, double* out);

/* Statistics ------------------------------------------------------------ */

CAPDDP_API capddp_status capddp_ad_two_sample(const double* x, size_t nx, const double* y, size_t ny,
                                              double* statistic, double* p_value);
CAPDDP_API capddp_status capddp_ad_one_sample_normal(const double* x, size_t n, double mean,
                                                     double variance, double* statistic,
                                                     double* p_value);

/* Drivers ---------------------------------------------------------------- */

typedef struct capddp_overrides {
    int has_seed;
    uint64_t seed;
    int has_variant;
    capddp_variant variant;
    const char* output_root; /* NULL: config output_dir, then $CAPDDP_OUTPUT_ROOT, then "runs" */
} capddp_overrides;

/* Writes group_<j>.csv (header group,index,value) into out_dir. */
CAPDDP_API capddp_status capddp_simulate_data(const char* generator, const size_t* sizes,
                                              size_t n_groups, uint64_t seed, const char* out_dir);

/* Validates a JSON run config without sampling. */
CAPDDP_API capddp_status capddp_check_config(const char* config_path);

/* Runs the configured experiment into a fresh directory; *run_dir receives
 * its path. overrides may be NULL. */
CAPDDP_API capddp_status capddp_run(const char* config_path, const capddp_overrides* overrides,
                                    char** run_dir);

/* Times both variants on the configured data; *report_json receives the
 * JSON report. */
CAPDDP_API capddp_status capddp_benchmark(const char* config_path, const capddp_overrides* overrides,
                                          char** report_json);

/* Batched Anderson-Darling tests on one group (1-based, as written in the
 * trace) of a trace_predictive.csv. reference is "normal:<mean>:<variance>"
 * for the one-sample test or "trace:<path>" for a two-sample test against
 * the same group of another predictive trace. */
CAPDDP_API capddp_status capddp_diagnostics(const char* predictive_csv, size_t group,
                                            const char* reference, size_t batch_size,
                                            char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* CAPDDP_CAPDDP_H */
