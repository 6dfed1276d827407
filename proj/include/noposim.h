/*
 * noposim C API: phase-oscillator network simulation and analysis behind a
 * plain C surface. All functions return a nopo_status; results travel
 * through out-parameters. Objects returned through *_create / *_run calls
 * are opaque handles owned by the caller and released with the matching
 * *_destroy. Strings returned through char** are heap-allocated and
 * released with nopo_string_free. nopo_last_error() describes the most
 * recent failure on the calling thread.
 */

#ifndef NOPOSIM_H
#define NOPOSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nopo_status {
  NOPO_OK = 0,
  NOPO_ERROR_INVALID_ARGUMENT = 1,
  NOPO_ERROR_NUMERIC = 2,
  NOPO_ERROR_IO = 3,
  NOPO_ERROR_INTERNAL = 4
} nopo_status;

const char* nopo_version(void);
const char* nopo_status_name(nopo_status status);
/* Thread-local message for the last failing call on this thread. */
const char* nopo_last_error(void);

/* ---------- coupling graphs and the XY Hamiltonian ---------- */

typedef struct nopo_graph nopo_graph;

nopo_status nopo_graph_ring(size_t n_spins, double coupling, nopo_graph** out);
nopo_status nopo_graph_create(size_t n_spins, const uint32_t* k,
                              const uint32_t* l, const double* weight,
                              size_t n_edges, nopo_graph** out);
void nopo_graph_destroy(nopo_graph* graph);
size_t nopo_graph_n_spins(const nopo_graph* graph);
size_t nopo_graph_n_edges(const nopo_graph* graph);

nopo_status nopo_wrap_phase(double angle, double* out);
nopo_status nopo_xy_energy(const nopo_graph* graph, const double* theta,
                           size_t n, double* out);
nopo_status nopo_xy_energy_gradient(const nopo_graph* graph, const double* theta,
                                    size_t n, double* grad_out);

/* ---------- single-oscillator physics ---------- */

typedef struct nopo_opo_params {
  double gamma_s;        /* signal decay rate, Hz */
  double gamma_i;        /* idler decay rate, Hz */
  double gamma_p;        /* pump decay rate, Hz */
  double kappa;          /* parametric coupling */
  double pump_amplitude; /* |F_p| */
} nopo_opo_params;

nopo_status nopo_gain_saturation(double x, double* out);
nopo_status nopo_threshold_pump(const nopo_opo_params* params, double* out);
nopo_status nopo_saturation_photon_number(const nopo_opo_params* params,
                                          double* out);
nopo_status nopo_steady_state_photon_number(const nopo_opo_params* params,
                                            double* out);
/* Above-threshold parameter set with a given pump ratio and steady-state
 * photon number; pump/idler rates sit rate_separation above gamma_s. */
nopo_status nopo_design_opo_params(double gamma_s, double pump_ratio,
                                   double n_ss_target, double rate_separation,
                                   nopo_opo_params* out);

/* ---------- ring thermodynamics ---------- */

nopo_status nopo_bessel_i(int order, double x, double* out);
nopo_status nopo_bessel_i_scaled(int order, double x, double* out);
nopo_status nopo_log_partition_function(size_t n_spins, double beta, int n_max,
                                        double* out);
nopo_status nopo_relative_phase_pdf_exact(double theta_rel, size_t n_spins,
                                          double beta, int n_max, double* out);
nopo_status nopo_mean_energy_exact(size_t n_spins, double beta, int n_max,
                                   double* out);
nopo_status nopo_relative_phase_pdf_approx(double theta_rel, double beta,
                                           double* out);
nopo_status nopo_mean_energy_approx(size_t n_spins, double beta, double* out);
nopo_status nopo_von_mises_cdf(double theta, double beta, double* out);

/* ---------- stochastic network simulation ---------- */

typedef enum nopo_model {
  NOPO_MODEL_KURAMOTO = 0, /* phase-only Langevin dynamics */
  NOPO_MODEL_SPLIT = 1,    /* photon-number / phase split */
  NOPO_MODEL_FULL = 2      /* complex-field Langevin dynamics */
} nopo_model;

typedef enum nopo_init {
  NOPO_INIT_UNIFORM = 0,
  NOPO_INIT_ALIGNED = 1
} nopo_init;

typedef struct nopo_ensemble_spec {
  nopo_model model;
  const nopo_graph* graph;
  double gamma_inj;    /* mutual injection rate, Hz */
  double d_theta;      /* phase diffusion, Hz (kuramoto) */
  double diffusion_d;  /* field diffusion, photons*Hz (split/full) */
  nopo_opo_params opo; /* split/full only */
  nopo_init init;
  double dt; /* 0 = default step rule */
  const double* sample_times;
  size_t n_sample_times;
  int n_trajectories;
  uint64_t master_seed;
  int n_threads; /* 0 = NOPOSIM_THREADS env or hardware */
} nopo_ensemble_spec;

typedef struct nopo_ensemble nopo_ensemble;

nopo_status nopo_ensemble_run(const nopo_ensemble_spec* spec,
                              nopo_ensemble** out);
void nopo_ensemble_destroy(nopo_ensemble* ensemble);
size_t nopo_ensemble_n_trajectories(const nopo_ensemble* ensemble);
size_t nopo_ensemble_n_times(const nopo_ensemble* ensemble);
size_t nopo_ensemble_n_spins(const nopo_ensemble* ensemble);
nopo_status nopo_ensemble_times(const nopo_ensemble* ensemble, double* out);
nopo_status nopo_ensemble_phases(const nopo_ensemble* ensemble,
                                 size_t trajectory, size_t time_index,
                                 double* out);
int nopo_ensemble_has_photon_numbers(const nopo_ensemble* ensemble);
nopo_status nopo_ensemble_photon_numbers(const nopo_ensemble* ensemble,
                                         size_t trajectory, size_t time_index,
                                         double* out);
/* Ring relative phases pooled over trajectories at one sample time;
 * capacity = n_trajectories * n_spins. */
nopo_status nopo_ensemble_relative_phases(const nopo_ensemble* ensemble,
                                          size_t time_index, double* out,
                                          size_t capacity, size_t* n_out);
nopo_status nopo_ensemble_decay_curve(const nopo_ensemble* ensemble,
                                      double* times_out, double* mean_cos_out,
                                      size_t capacity, size_t* n_out);
nopo_status nopo_ensemble_mean_energy(const nopo_ensemble* ensemble,
                                      const nopo_graph* graph,
                                      size_t time_index, double* mean_out,
                                      double* std_dev_out, size_t* n_out);

nopo_status nopo_gamma_inj_from_transmittance(double transmittance,
                                              double round_trip_seconds,
                                              double* out);

/* ---------- estimation ---------- */

typedef enum nopo_beta_method {
  NOPO_BETA_MLE = 0,
  NOPO_BETA_HISTOGRAM = 1
} nopo_beta_method;

nopo_status nopo_estimate_beta(const double* relative_phases, size_t n,
                               nopo_beta_method method, double* beta_out,
                               double* std_error_out);
nopo_status nopo_besselratio_inverse(double r, double* beta_out);
nopo_status nopo_fit_diffusion(const double* times, const double* mean_cosine,
                               size_t n_points, double* d_theta_out,
                               double* std_error_out);

/* ---------- Metropolis oracle ---------- */

typedef struct nopo_mcmc_config {
  double beta;
  double proposal_width; /* radians, in (0, pi] */
  int n_sweeps;          /* post burn-in */
  int burn_in;           /* -1 = default rule */
  int thin;
  uint64_t seed;
  int auto_tune; /* nonzero tunes the width during burn-in */
} nopo_mcmc_config;

typedef struct nopo_chain nopo_chain;

nopo_status nopo_mcmc_sample_chain(const nopo_mcmc_config* config,
                                   const nopo_graph* graph, nopo_chain** out);
void nopo_chain_destroy(nopo_chain* chain);
size_t nopo_chain_n_configs(const nopo_chain* chain);
nopo_status nopo_chain_config(const nopo_chain* chain, size_t index,
                              double* theta_out);
nopo_status nopo_chain_relative_phases(const nopo_chain* chain, double* out,
                                       size_t capacity, size_t* n_out);

nopo_status nopo_distribution_distance(const double* a, size_t na,
                                       const double* b, size_t nb,
                                       double* tv_out, double* ks_out);
nopo_status nopo_distribution_distance_von_mises(const double* samples, size_t n,
                                                 double beta, double* tv_out,
                                                 double* ks_out);

/* ---------- batch experiments and validation ---------- */

/* Runs a configured experiment. config_path may be NULL when the overrides
 * fully describe the run; overrides are "key=value" strings with the config
 * file keys and win over the file. On success *summary_json_out carries the
 * summary document also written to disk. */
nopo_status nopo_experiment_run(const char* config_path,
                                const char* const* overrides,
                                size_t n_overrides, char** summary_json_out);

/* Runs a named validation suite (opo, analytics, estimation, reduction,
 * boltzmann). quick != 0 shrinks sample sizes for smoke testing.
 * *passed_out is 1 when every check passed. */
nopo_status nopo_validate_suite(const char* suite, int quick, int n_threads,
                                int* passed_out, char** report_json_out);

nopo_status nopo_analytics_table(const double* betas, size_t n_betas,
                                 const size_t* n_spins, size_t n_ns, int n_max,
                                 char** csv_out);

/* Documentation of the experiment config keys, for front-end --help text. */
nopo_status nopo_config_key_reference(char** text_out);

void nopo_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* NOPOSIM_H */
