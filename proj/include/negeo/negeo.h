/*
 * negeo C API.
 *
 * Every object is an opaque handle created by a create, load or run call
 * and released with the matching free function. Every fallible call returns a
 * negeo_status; on failure a message is available from negeo_last_error()
 * (thread-local, valid until the next failing call on the same thread).
 * Output handles are set to NULL on failure.
 */
#ifndef NEGEO_NEGEO_H
#define NEGEO_NEGEO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NEGEO_BUILDING_LIBRARY)
#    define NEGEO_API __declspec(dllexport)
#  else
#    define NEGEO_API __declspec(dllimport)
#  endif
#else
#  define NEGEO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum negeo_status {
    NEGEO_OK = 0,
    NEGEO_ERR_USAGE = 1,          /* precondition / missing series / bad argument */
    NEGEO_ERR_VALIDATION = 2,     /* input data violates an invariant */
    NEGEO_ERR_DOMAIN = 3,         /* function evaluated outside its domain */
    NEGEO_ERR_NONCONVERGENCE = 4, /* mandatory convergence failed */
    NEGEO_ERR_ESTIMATION = 5,     /* degenerate estimation problem */
    NEGEO_ERR_IO = 6,
    NEGEO_ERR_INTERNAL = 7
} negeo_status;

typedef enum negeo_variant {
    NEGEO_KRUGMAN = 0,
    NEGEO_THOMAS_HOUSING = 1,
    NEGEO_THOMAS_AGRI = 2,
    NEGEO_FUJITA = 3
} negeo_variant;

typedef enum negeo_format { NEGEO_FORMAT_TABLE = 0, NEGEO_FORMAT_RECORDS = 1 } negeo_format;

typedef struct negeo_params {
    double sigma;
    double mu;
    double tau;
} negeo_params;

typedef struct negeo_solver_options {
    double tol;
    int max_iter;
    double damping;
} negeo_solver_options;

typedef struct negeo_dynamics_options {
    double gamma;
    double dt;
    long max_steps;
    double stop_tol;
    long sample_every;
} negeo_dynamics_options;

typedef struct negeo_fit_options {
    negeo_params start;
    int multistart;
    uint64_t seed;
    int max_iter;
    double fd_step;
    double ftol;
    int fix_mu;      /* nonzero: pin mu to fixed_mu */
    double fixed_mu;
} negeo_fit_options;

typedef struct negeo_synthetic_spec {
    negeo_params truth;
    int regions;
    int years;
    int first_year;
    double spacing;
    double noise_sd;
    double innovation_sd;
    uint64_t seed;
} negeo_synthetic_spec;

/* Scalar summary of a fit. NaN marks unavailable values. */
typedef struct negeo_fit_summary {
    double sigma, sigma_se, sigma_t;
    double mu, mu_se, mu_t;
    double tau, tau_se, tau_t;
    int has_tau;
    int mu_fixed;
    int se_available;
    double r2, dw, see, objective;
    long observations;
    long dropped;
    int iterations;
    int converged;
    double returns_index;
    double blackhole_index;
    int warn_mu_above_one;
    int warn_tau_at_bound;
} negeo_fit_summary;

typedef enum negeo_field {
    NEGEO_FIELD_Y = 0,
    NEGEO_FIELD_W = 1,
    NEGEO_FIELD_G = 2,
    NEGEO_FIELD_P = 3, /* Thomas only */
    NEGEO_FIELD_OMEGA = 4,
    NEGEO_FIELD_LAMBDA = 5
} negeo_field;

typedef struct negeo_geography negeo_geography;
typedef struct negeo_equilibrium negeo_equilibrium;
typedef struct negeo_trajectory negeo_trajectory;
typedef struct negeo_sweep negeo_sweep;
typedef struct negeo_panel negeo_panel;
typedef struct negeo_fit negeo_fit;

NEGEO_API const char* negeo_last_error(void);
NEGEO_API const char* negeo_version(void);

NEGEO_API negeo_status negeo_variant_parse(const char* name, negeo_variant* out);
NEGEO_API negeo_status negeo_format_parse(const char* name, negeo_format* out);

NEGEO_API void negeo_solver_options_default(negeo_solver_options* out);
NEGEO_API void negeo_dynamics_options_default(negeo_dynamics_options* out);
NEGEO_API void negeo_fit_options_default(negeo_fit_options* out);
NEGEO_API void negeo_synthetic_spec_default(negeo_synthetic_spec* out);

/* Derived diagnostics. */
NEGEO_API negeo_status negeo_returns_index(double sigma, double* out);
NEGEO_API double negeo_blackhole_index(double sigma, double mu);

/* Geography: distances and optional transport costs (transport_path may be NULL). */
NEGEO_API negeo_status negeo_geography_load(const char* distances_path, const char* transport_path,
                                            negeo_geography** out);
NEGEO_API negeo_status negeo_geography_line(int regions, double spacing, negeo_geography** out);
NEGEO_API size_t negeo_geography_size(const negeo_geography* geo);
NEGEO_API const char* negeo_geography_region_id(const negeo_geography* geo, size_t i);
NEGEO_API void negeo_geography_free(negeo_geography* geo);

/* Short-run equilibrium. phi may be NULL for Thomas; H may be NULL for
 * Krugman/Fujita. year selects the Fujita transport matrix (has_year = 0:
 * first year). A non-converged solve still returns NEGEO_OK; query
 * negeo_equilibrium_converged. */
NEGEO_API negeo_status negeo_solve(negeo_variant variant, const negeo_params* params,
                                   const negeo_geography* geo, const double* lambda,
                                   const double* phi, const double* H, double L,
                                   const negeo_solver_options* opts, int has_year, int year,
                                   negeo_equilibrium** out);
NEGEO_API int negeo_equilibrium_converged(const negeo_equilibrium* eq);
NEGEO_API int negeo_equilibrium_iterations(const negeo_equilibrium* eq);
NEGEO_API double negeo_equilibrium_residual(const negeo_equilibrium* eq);
/* Copies n = geography size values of the field into buf. */
NEGEO_API negeo_status negeo_equilibrium_get(const negeo_equilibrium* eq, negeo_field field,
                                             double* buf, size_t n);
NEGEO_API void negeo_equilibrium_free(negeo_equilibrium* eq);

/* Migration dynamics from lambda0. */
NEGEO_API negeo_status negeo_simulate(negeo_variant variant, const negeo_params* params,
                                      const negeo_geography* geo, const double* lambda0,
                                      const double* phi, const double* H, double L,
                                      const negeo_dynamics_options* dyn,
                                      const negeo_solver_options* solver,
                                      negeo_trajectory** out);
NEGEO_API size_t negeo_trajectory_samples(const negeo_trajectory* t);
NEGEO_API double negeo_trajectory_time(const negeo_trajectory* t, size_t k);
NEGEO_API negeo_status negeo_trajectory_lambda(const negeo_trajectory* t, size_t k, double* buf,
                                               size_t n);
NEGEO_API negeo_status negeo_trajectory_omega(const negeo_trajectory* t, size_t k, double* buf,
                                              size_t n);
NEGEO_API double negeo_trajectory_concentration(const negeo_trajectory* t);
NEGEO_API int negeo_trajectory_settled(const negeo_trajectory* t);
NEGEO_API void negeo_trajectory_free(negeo_trajectory* t);

/* Bifurcation sweep over a strictly increasing tau grid (params->tau ignored). */
NEGEO_API negeo_status negeo_tau_sweep(negeo_variant variant, const negeo_params* params,
                                       const negeo_geography* geo, const double* tau_grid,
                                       size_t grid_size, double perturbation, const double* phi,
                                       const double* H, double L,
                                       const negeo_dynamics_options* dyn,
                                       const negeo_solver_options* solver, unsigned threads,
                                       negeo_sweep** out);
NEGEO_API size_t negeo_sweep_size(const negeo_sweep* s);
NEGEO_API double negeo_sweep_tau(const negeo_sweep* s, size_t k);
NEGEO_API double negeo_sweep_concentration(const negeo_sweep* s, size_t k);
NEGEO_API int negeo_sweep_ok(const negeo_sweep* s, size_t k);
NEGEO_API int negeo_sweep_settled(const negeo_sweep* s, size_t k);
NEGEO_API const char* negeo_sweep_error(const negeo_sweep* s, size_t k);
/* Nonzero when at least 90% of points succeeded. */
NEGEO_API int negeo_sweep_acceptable(const negeo_sweep* s);
NEGEO_API void negeo_sweep_free(negeo_sweep* s);

/* Panels. */
NEGEO_API negeo_status negeo_panel_load(const char* panel_path, const char* distances_path,
                                        const char* transport_path, negeo_panel** out);
NEGEO_API negeo_status negeo_panel_generate(const negeo_synthetic_spec* spec, negeo_panel** out);
NEGEO_API negeo_status negeo_panel_write(const negeo_panel* panel, const char* panel_path,
                                         const char* distances_path, const char* transport_path);
NEGEO_API size_t negeo_panel_regions(const negeo_panel* panel);
NEGEO_API size_t negeo_panel_years(const negeo_panel* panel);
NEGEO_API int negeo_panel_has_housing(const negeo_panel* panel);
NEGEO_API int negeo_panel_has_transport(const negeo_panel* panel);
NEGEO_API void negeo_panel_free(negeo_panel* panel);

/* Estimation and reports. Report strings are released with negeo_string_free. */
NEGEO_API negeo_status negeo_fit_run(negeo_variant variant, const negeo_panel* panel,
                                     const negeo_fit_options* opts, negeo_fit** out);
NEGEO_API negeo_status negeo_fit_parse_records(const char* text, negeo_fit** out);
NEGEO_API negeo_status negeo_fit_report(const negeo_fit* fit, negeo_format format, char** out);
NEGEO_API void negeo_fit_get_summary(const negeo_fit* fit, negeo_fit_summary* out);
NEGEO_API void negeo_fit_free(negeo_fit* fit);
NEGEO_API void negeo_string_free(char* s);

/* Atomic file write (temporary file + rename). */
NEGEO_API negeo_status negeo_write_file(const char* path, const char* contents, size_t size);

#ifdef __cplusplus
}
#endif

#endif /* NEGEO_NEGEO_H */
