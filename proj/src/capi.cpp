#include "noposim.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "nopo/analytics.hpp"
#include "nopo/errors.hpp"
#include "nopo/estimation.hpp"
#include "nopo/experiment.hpp"
#include "nopo/mcmc.hpp"
#include "nopo/network.hpp"
#include "nopo/opo.hpp"
#include "nopo/validate.hpp"
#include "nopo/xy.hpp"

namespace {

thread_local std::string g_last_error;

nopo_status record_error(const std::exception& e, nopo_status status) {
  g_last_error = e.what();
  return status;
}

/* Exceptions stop at the C boundary and become status codes. */
template <typename Fn>
nopo_status guarded(Fn&& fn) {
  try {
    fn();
    return NOPO_OK;
  } catch (const nopo::InvalidArgument& e) {
    return record_error(e, NOPO_ERROR_INVALID_ARGUMENT);
  } catch (const nopo::NumericError& e) {
    return record_error(e, NOPO_ERROR_NUMERIC);
  } catch (const nopo::IoError& e) {
    return record_error(e, NOPO_ERROR_IO);
  } catch (const std::bad_alloc& e) {
    return record_error(e, NOPO_ERROR_INTERNAL);
  } catch (const std::exception& e) {
    return record_error(e, NOPO_ERROR_INTERNAL);
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nopo::OpoParams to_cpp(const nopo_opo_params& p) {
  nopo::OpoParams out;
  out.gamma_s = p.gamma_s;
  out.gamma_i = p.gamma_i;
  out.gamma_p = p.gamma_p;
  out.kappa = p.kappa;
  out.pump_amplitude = p.pump_amplitude;
  return out;
}

void require(bool condition, const char* message) {
  if (!condition) throw nopo::InvalidArgument(message);
}

}  // namespace

struct nopo_graph {
  nopo::CouplingGraph graph;
};

struct nopo_ensemble {
  std::vector<nopo::TrajectoryRecord> records;
};

struct nopo_chain {
  std::vector<nopo::PhaseConfig> configs;
};

extern "C" {

const char* nopo_version(void) { return "1.0.0"; }

const char* nopo_status_name(nopo_status status) {
  switch (status) {
    case NOPO_OK: return "ok";
    case NOPO_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case NOPO_ERROR_NUMERIC: return "numeric failure";
    case NOPO_ERROR_IO: return "io failure";
    case NOPO_ERROR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* nopo_last_error(void) { return g_last_error.c_str(); }

nopo_status nopo_graph_ring(size_t n_spins, double coupling, nopo_graph** out) {
  return guarded([&] {
    require(out != nullptr, "nopo_graph_ring: out is null");
    *out = new nopo_graph{nopo::CouplingGraph::ring(n_spins, coupling)};
  });
}

nopo_status nopo_graph_create(size_t n_spins, const uint32_t* k,
                              const uint32_t* l, const double* weight,
                              size_t n_edges, nopo_graph** out) {
  return guarded([&] {
    require(out != nullptr, "nopo_graph_create: out is null");
    require(n_edges == 0 || (k && l && weight),
            "nopo_graph_create: edge arrays are null");
    std::vector<nopo::Edge> edges;
    edges.reserve(n_edges);
    for (size_t i = 0; i < n_edges; ++i) edges.push_back({k[i], l[i], weight[i]});
    *out = new nopo_graph{nopo::CouplingGraph(n_spins, std::move(edges))};
  });
}

void nopo_graph_destroy(nopo_graph* graph) { delete graph; }

size_t nopo_graph_n_spins(const nopo_graph* graph) {
  return graph ? graph->graph.n_spins() : 0;
}

size_t nopo_graph_n_edges(const nopo_graph* graph) {
  return graph ? graph->graph.n_edges() : 0;
}

nopo_status nopo_wrap_phase(double angle, double* out) {
  return guarded([&] {
    require(out != nullptr, "nopo_wrap_phase: out is null");
    *out = nopo::wrap_phase(angle);
  });
}

nopo_status nopo_xy_energy(const nopo_graph* graph, const double* theta,
                           size_t n, double* out) {
  return guarded([&] {
    require(graph && theta && out, "nopo_xy_energy: null argument");
    nopo::PhaseConfig config(std::vector<double>(theta, theta + n));
    *out = nopo::xy_energy(config, graph->graph).value;
  });
}

nopo_status nopo_xy_energy_gradient(const nopo_graph* graph, const double* theta,
                                    size_t n, double* grad_out) {
  return guarded([&] {
    require(graph && theta && grad_out, "nopo_xy_energy_gradient: null argument");
    nopo::PhaseConfig config(std::vector<double>(theta, theta + n));
    const auto grad = nopo::xy_energy_gradient(config, graph->graph);
    std::memcpy(grad_out, grad.data(), grad.size() * sizeof(double));
  });
}

nopo_status nopo_gain_saturation(double x, double* out) {
  return guarded([&] {
    require(out != nullptr, "nopo_gain_saturation: out is null");
    *out = nopo::gain_saturation(x);
  });
}

nopo_status nopo_threshold_pump(const nopo_opo_params* params, double* out) {
  return guarded([&] {
    require(params && out, "nopo_threshold_pump: null argument");
    *out = nopo::threshold_pump(to_cpp(*params));
  });
}

nopo_status nopo_saturation_photon_number(const nopo_opo_params* params,
                                          double* out) {
  return guarded([&] {
    require(params && out, "nopo_saturation_photon_number: null argument");
    *out = nopo::saturation_photon_number(to_cpp(*params));
  });
}

nopo_status nopo_steady_state_photon_number(const nopo_opo_params* params,
                                            double* out) {
  return guarded([&] {
    require(params && out, "nopo_steady_state_photon_number: null argument");
    *out = nopo::steady_state_photon_number(to_cpp(*params));
  });
}

nopo_status nopo_design_opo_params(double gamma_s, double pump_ratio,
                                   double n_ss_target, double rate_separation,
                                   nopo_opo_params* out) {
  return guarded([&] {
    require(out != nullptr, "nopo_design_opo_params: out is null");
    const auto p =
        nopo::design_opo_params(gamma_s, pump_ratio, n_ss_target, rate_separation);
    *out = {p.gamma_s, p.gamma_i, p.gamma_p, p.kappa, p.pump_amplitude};
  });
}

nopo_status nopo_bessel_i(int order, double x, double* out) {
  return guarded([&] {
    require(out != nullptr, "nopo_bessel_i: out is null");
    *out = nopo::bessel_i(order, x);
  });
}

nopo_status nopo_bessel_i_scaled(int order, double x, double* out) {
  return guarded([&] {
    require(out != nullptr, "nopo_bessel_i_scaled: out is null");
    *out = nopo::bessel_i_scaled(order, x);
  });
}

nopo_status nopo_log_partition_function(size_t n_spins, double beta, int n_max,
                                        double* out) {
  return guarded([&] {
    require(out != nullptr, "nopo_log_partition_function: out is null");
    *out = nopo::log_partition_function({n_spins, beta}, n_max);
  });
}

nopo_status nopo_relative_phase_pdf_exact(double theta_rel, size_t n_spins,
                                          double beta, int n_max, double* out) {
  return guarded([&] {
    require(out != nullptr, "nopo_relative_phase_pdf_exact: out is null");
    *out = nopo::relative_phase_pdf_exact(theta_rel, {n_spins, beta}, n_max);
  });
}

nopo_status nopo_mean_energy_exact(size_t n_spins, double beta, int n_max,
                                   double* out) {
  return guarded([&] {
    require(out != nullptr, "nopo_mean_energy_exact: out is null");
    *out = nopo::mean_energy_exact({n_spins, beta}, n_max);
  });
}

nopo_status nopo_relative_phase_pdf_approx(double theta_rel, double beta,
                                           double* out) {
  return guarded([&] {
    require(out != nullptr, "nopo_relative_phase_pdf_approx: out is null");
    *out = nopo::relative_phase_pdf_approx(theta_rel, beta);
  });
}

nopo_status nopo_mean_energy_approx(size_t n_spins, double beta, double* out) {
  return guarded([&] {
    require(out != nullptr, "nopo_mean_energy_approx: out is null");
    *out = nopo::mean_energy_approx(n_spins, beta);
  });
}

nopo_status nopo_von_mises_cdf(double theta, double beta, double* out) {
  return guarded([&] {
    require(out != nullptr, "nopo_von_mises_cdf: out is null");
    *out = nopo::von_mises_cdf(theta, beta);
  });
}

nopo_status nopo_ensemble_run(const nopo_ensemble_spec* spec,
                              nopo_ensemble** out) {
  return guarded([&] {
    require(spec && out, "nopo_ensemble_run: null argument");
    require(spec->graph != nullptr, "nopo_ensemble_run: graph is null");
    require(spec->sample_times != nullptr,
            "nopo_ensemble_run: sample_times is null");
    nopo::EnsembleSpec es;
    switch (spec->model) {
      case NOPO_MODEL_KURAMOTO:
        es.model = nopo::SimModel::kuramoto;
        es.kuramoto = nopo::KuramotoParams{spec->gamma_inj, spec->d_theta,
                                           spec->graph->graph};
        break;
      case NOPO_MODEL_SPLIT:
        es.model = nopo::SimModel::amplitude_phase;
        es.network = nopo::NetworkParams{to_cpp(spec->opo), spec->gamma_inj,
                                         spec->diffusion_d, spec->graph->graph};
        break;
      case NOPO_MODEL_FULL:
        es.model = nopo::SimModel::full_field;
        es.network = nopo::NetworkParams{to_cpp(spec->opo), spec->gamma_inj,
                                         spec->diffusion_d, spec->graph->graph};
        break;
      default:
        throw nopo::InvalidArgument("nopo_ensemble_run: unknown model");
    }
    es.init = spec->init == NOPO_INIT_ALIGNED ? nopo::InitialPhases::aligned
                                              : nopo::InitialPhases::uniform_random;
    es.dt = spec->dt;
    es.sample_times.assign(spec->sample_times,
                           spec->sample_times + spec->n_sample_times);
    es.n_trajectories = spec->n_trajectories;
    es.master_seed = spec->master_seed;
    *out = new nopo_ensemble{nopo::ensemble_run(es, spec->n_threads)};
  });
}

void nopo_ensemble_destroy(nopo_ensemble* ensemble) { delete ensemble; }

size_t nopo_ensemble_n_trajectories(const nopo_ensemble* ensemble) {
  return ensemble ? ensemble->records.size() : 0;
}

size_t nopo_ensemble_n_times(const nopo_ensemble* ensemble) {
  return ensemble && !ensemble->records.empty()
             ? ensemble->records.front().sample_times.size()
             : 0;
}

size_t nopo_ensemble_n_spins(const nopo_ensemble* ensemble) {
  return ensemble && !ensemble->records.empty()
             ? ensemble->records.front().snapshots.front().n_spins()
             : 0;
}

nopo_status nopo_ensemble_times(const nopo_ensemble* ensemble, double* out) {
  return guarded([&] {
    require(ensemble && out, "nopo_ensemble_times: null argument");
    const auto& times = ensemble->records.front().sample_times;
    std::memcpy(out, times.data(), times.size() * sizeof(double));
  });
}

nopo_status nopo_ensemble_phases(const nopo_ensemble* ensemble,
                                 size_t trajectory, size_t time_index,
                                 double* out) {
  return guarded([&] {
    require(ensemble && out, "nopo_ensemble_phases: null argument");
    require(trajectory < ensemble->records.size(),
            "nopo_ensemble_phases: trajectory out of range");
    const auto& rec = ensemble->records[trajectory];
    require(time_index < rec.snapshots.size(),
            "nopo_ensemble_phases: time index out of range");
    const auto angles = rec.snapshots[time_index].angles();
    std::memcpy(out, angles.data(), angles.size() * sizeof(double));
  });
}

int nopo_ensemble_has_photon_numbers(const nopo_ensemble* ensemble) {
  return ensemble && !ensemble->records.empty() &&
                 ensemble->records.front().has_photon_numbers()
             ? 1
             : 0;
}

nopo_status nopo_ensemble_photon_numbers(const nopo_ensemble* ensemble,
                                         size_t trajectory, size_t time_index,
                                         double* out) {
  return guarded([&] {
    require(ensemble && out, "nopo_ensemble_photon_numbers: null argument");
    require(trajectory < ensemble->records.size(),
            "nopo_ensemble_photon_numbers: trajectory out of range");
    const auto& rec = ensemble->records[trajectory];
    require(rec.has_photon_numbers(),
            "nopo_ensemble_photon_numbers: phase-only trajectories");
    require(time_index < rec.photon_numbers.size(),
            "nopo_ensemble_photon_numbers: time index out of range");
    const auto& n = rec.photon_numbers[time_index];
    std::memcpy(out, n.data(), n.size() * sizeof(double));
  });
}

nopo_status nopo_ensemble_relative_phases(const nopo_ensemble* ensemble,
                                          size_t time_index, double* out,
                                          size_t capacity, size_t* n_out) {
  return guarded([&] {
    require(ensemble && out && n_out,
            "nopo_ensemble_relative_phases: null argument");
    const auto rel =
        nopo::collect_relative_phases(ensemble->records, time_index);
    require(rel.size() <= capacity,
            "nopo_ensemble_relative_phases: buffer too small");
    std::memcpy(out, rel.data(), rel.size() * sizeof(double));
    *n_out = rel.size();
  });
}

nopo_status nopo_ensemble_decay_curve(const nopo_ensemble* ensemble,
                                      double* times_out, double* mean_cos_out,
                                      size_t capacity, size_t* n_out) {
  return guarded([&] {
    require(ensemble && times_out && mean_cos_out && n_out,
            "nopo_ensemble_decay_curve: null argument");
    const auto curve = nopo::decay_curve(ensemble->records);
    require(curve.times.size() <= capacity,
            "nopo_ensemble_decay_curve: buffer too small");
    std::memcpy(times_out, curve.times.data(),
                curve.times.size() * sizeof(double));
    std::memcpy(mean_cos_out, curve.mean_cosine.data(),
                curve.mean_cosine.size() * sizeof(double));
    *n_out = curve.times.size();
  });
}

nopo_status nopo_ensemble_mean_energy(const nopo_ensemble* ensemble,
                                      const nopo_graph* graph,
                                      size_t time_index, double* mean_out,
                                      double* std_dev_out, size_t* n_out) {
  return guarded([&] {
    require(ensemble && graph && mean_out && std_dev_out && n_out,
            "nopo_ensemble_mean_energy: null argument");
    require(!ensemble->records.empty(), "nopo_ensemble_mean_energy: empty");
    const auto& times = ensemble->records.front().sample_times;
    require(time_index < times.size(),
            "nopo_ensemble_mean_energy: time index out of range");
    const auto est = nopo::mean_energy_of_samples(ensemble->records,
                                                  graph->graph, times[time_index]);
    *mean_out = est.mean;
    *std_dev_out = est.std_dev;
    *n_out = static_cast<size_t>(est.n_samples);
  });
}

nopo_status nopo_gamma_inj_from_transmittance(double transmittance,
                                              double round_trip_seconds,
                                              double* out) {
  return guarded([&] {
    require(out != nullptr, "nopo_gamma_inj_from_transmittance: out is null");
    *out = nopo::gamma_inj_from_transmittance(transmittance, round_trip_seconds);
  });
}

nopo_status nopo_estimate_beta(const double* relative_phases, size_t n,
                               nopo_beta_method method, double* beta_out,
                               double* std_error_out) {
  return guarded([&] {
    require(relative_phases && beta_out && std_error_out,
            "nopo_estimate_beta: null argument");
    const auto est = nopo::estimate_beta(
        std::span<const double>(relative_phases, n),
        method == NOPO_BETA_HISTOGRAM ? nopo::BetaMethod::histogram_fit
                                      : nopo::BetaMethod::mle);
    *beta_out = est.beta_eff;
    *std_error_out = est.std_error;
  });
}

nopo_status nopo_besselratio_inverse(double r, double* beta_out) {
  return guarded([&] {
    require(beta_out != nullptr, "nopo_besselratio_inverse: out is null");
    *beta_out = nopo::besselratio_inverse(r);
  });
}

nopo_status nopo_fit_diffusion(const double* times, const double* mean_cosine,
                               size_t n_points, double* d_theta_out,
                               double* std_error_out) {
  return guarded([&] {
    require(times && mean_cosine && d_theta_out && std_error_out,
            "nopo_fit_diffusion: null argument");
    nopo::DecayCurve curve;
    curve.times.assign(times, times + n_points);
    curve.mean_cosine.assign(mean_cosine, mean_cosine + n_points);
    curve.n_samples.assign(n_points, 0);
    const auto fit = nopo::fit_diffusion(curve);
    *d_theta_out = fit.d_theta;
    *std_error_out = fit.std_error;
  });
}

nopo_status nopo_mcmc_sample_chain(const nopo_mcmc_config* config,
                                   const nopo_graph* graph, nopo_chain** out) {
  return guarded([&] {
    require(config && graph && out, "nopo_mcmc_sample_chain: null argument");
    nopo::McmcConfig mc;
    mc.beta = config->beta;
    mc.proposal_width = config->proposal_width;
    mc.n_sweeps = config->n_sweeps;
    mc.burn_in = config->burn_in;
    mc.thin = config->thin;
    mc.seed = config->seed;
    mc.auto_tune = config->auto_tune != 0;
    *out = new nopo_chain{nopo::sample_chain(mc, graph->graph)};
  });
}

void nopo_chain_destroy(nopo_chain* chain) { delete chain; }

size_t nopo_chain_n_configs(const nopo_chain* chain) {
  return chain ? chain->configs.size() : 0;
}

nopo_status nopo_chain_config(const nopo_chain* chain, size_t index,
                              double* theta_out) {
  return guarded([&] {
    require(chain && theta_out, "nopo_chain_config: null argument");
    require(index < chain->configs.size(),
            "nopo_chain_config: index out of range");
    const auto angles = chain->configs[index].angles();
    std::memcpy(theta_out, angles.data(), angles.size() * sizeof(double));
  });
}

nopo_status nopo_chain_relative_phases(const nopo_chain* chain, double* out,
                                       size_t capacity, size_t* n_out) {
  return guarded([&] {
    require(chain && out && n_out, "nopo_chain_relative_phases: null argument");
    std::size_t total = 0;
    for (const auto& config : chain->configs) {
      const auto rel = nopo::ring_relative_phases(config);
      require(total + rel.size() <= capacity,
              "nopo_chain_relative_phases: buffer too small");
      std::memcpy(out + total, rel.data(), rel.size() * sizeof(double));
      total += rel.size();
    }
    *n_out = total;
  });
}

nopo_status nopo_distribution_distance(const double* a, size_t na,
                                       const double* b, size_t nb,
                                       double* tv_out, double* ks_out) {
  return guarded([&] {
    require(a && b && tv_out && ks_out,
            "nopo_distribution_distance: null argument");
    const auto d = nopo::distribution_distance(std::span<const double>(a, na),
                                               std::span<const double>(b, nb));
    *tv_out = d.tv_distance;
    *ks_out = d.ks_statistic;
  });
}

nopo_status nopo_distribution_distance_von_mises(const double* samples, size_t n,
                                                 double beta, double* tv_out,
                                                 double* ks_out) {
  return guarded([&] {
    require(samples && tv_out && ks_out,
            "nopo_distribution_distance_von_mises: null argument");
    const auto d = nopo::distribution_distance_to_von_mises(
        std::span<const double>(samples, n), beta);
    *tv_out = d.tv_distance;
    *ks_out = d.ks_statistic;
  });
}

nopo_status nopo_experiment_run(const char* config_path,
                                const char* const* overrides,
                                size_t n_overrides, char** summary_json_out) {
  return guarded([&] {
    require(n_overrides == 0 || overrides != nullptr,
            "nopo_experiment_run: overrides is null");
    nopo::ExperimentSpec spec = config_path
                                    ? nopo::parse_config_file(config_path)
                                    : nopo::ExperimentSpec{};
    for (size_t i = 0; i < n_overrides; ++i) {
      require(overrides[i] != nullptr, "nopo_experiment_run: null override");
      nopo::apply_override(spec, overrides[i]);
    }
    const auto result = nopo::run_experiment(spec);
    if (summary_json_out) *summary_json_out = copy_string(result.summary_json);
  });
}

nopo_status nopo_validate_suite(const char* suite, int quick, int n_threads,
                                int* passed_out, char** report_json_out) {
  return guarded([&] {
    require(suite != nullptr, "nopo_validate_suite: suite is null");
    const auto report =
        nopo::run_validation_suite(suite, quick != 0, n_threads);
    if (passed_out) *passed_out = report.passed ? 1 : 0;
    if (report_json_out) {
      *report_json_out = copy_string(nopo::suite_report_json(report));
    }
  });
}

nopo_status nopo_analytics_table(const double* betas, size_t n_betas,
                                 const size_t* n_spins, size_t n_ns, int n_max,
                                 char** csv_out) {
  return guarded([&] {
    require(betas && n_spins && csv_out, "nopo_analytics_table: null argument");
    const auto csv = nopo::analytics_table_csv(
        std::span<const double>(betas, n_betas),
        std::span<const std::size_t>(n_spins, n_ns), n_max);
    *csv_out = copy_string(csv);
  });
}

nopo_status nopo_config_key_reference(char** text_out) {
  return guarded([&] {
    require(text_out != nullptr, "nopo_config_key_reference: out is null");
    *text_out = copy_string(nopo::config_key_reference());
  });
}

void nopo_string_free(char* s) { std::free(s); }

}  // extern "C"
