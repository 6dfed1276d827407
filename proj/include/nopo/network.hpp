#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nopo/opo.hpp"
#include "nopo/xy.hpp"

namespace nopo {

/// Parameters of the coupled NOPO network Langevin dynamics.
struct NetworkParams {
  OpoParams opo;
  double gamma_inj = 0.0;   ///< mutual injection rate, Hz
  double diffusion_d = 0.0; ///< field diffusion coefficient D, photons*Hz
  CouplingGraph graph;

  void validate() const;
  /// gamma_s >> gamma_inj, the condition for the phase-only reduction.
  bool kuramoto_regime(double factor = 1000.0) const;
};

/// Parameters of the reduced phase-only (noisy Kuramoto) dynamics.
struct KuramotoParams {
  double gamma_inj = 0.0; ///< Hz
  double d_theta = 0.0;   ///< phase diffusion coefficient, Hz
  CouplingGraph graph;

  void validate() const;
  double beta_set() const;  ///< gamma_inj / d_theta; requires d_theta > 0
};

/// Time-stamped snapshots from one stochastic run.
struct TrajectoryRecord {
  std::vector<double> sample_times;            ///< strictly increasing, seconds
  std::vector<PhaseConfig> snapshots;          ///< one per sample time
  std::vector<std::vector<double>> photon_numbers;  ///< empty for phase-only runs
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string params_digest;

  bool has_photon_numbers() const { return !photon_numbers.empty(); }
  /// Index of the snapshot taken at time t (relative tolerance 1e-9).
  std::size_t index_of_time(double t) const;
};

/// Mutual injection rate from the delay-line transmittance and the cavity
/// round trip time: gamma_inj = 2 sqrt(T) / tau_rt.
double gamma_inj_from_transmittance(double transmittance,
                                    double round_trip_seconds = 5e-6);

/// Largest dt satisfying max(gamma_inj*degree, d_theta) * dt = 0.01.
double default_kuramoto_dt(const KuramotoParams& params);
/// Same rule with gamma_s included for the field-level simulators.
double default_network_dt(const NetworkParams& params);

/// Euler-Maruyama integration of the full complex-field network equation.
/// Each field receives independent real and imaginary Gaussian increments of
/// variance D*dt per step (delta-correlated complex noise with
/// <xi* xi'> = 2 delta); this is the convention under which the phase
/// diffusion coefficient comes out as D_theta = D / n_ss.
/// Records wrapped phases and photon numbers at the requested sample times.
TrajectoryRecord simulate_full_network(const NetworkParams& params,
                                       std::span<const std::complex<double>> initial,
                                       double dt, std::span<const double> sample_times,
                                       std::uint64_t seed, std::uint64_t stream = 0);

/// Euler-Maruyama integration of the photon-number/phase split of the same
/// dynamics. The sqrt(n_k n_l) injection factor sits inside the sum over l,
/// the only reading consistent with the complex-field form. Steps driving
/// any n_k to zero or below are retried with halved dt (the origin is a
/// coordinate singularity of the split form, not of the physics); after 10
/// halvings the integration fails.
TrajectoryRecord simulate_amplitude_phase(const NetworkParams& params,
                                          std::span<const double> initial_n,
                                          const PhaseConfig& initial_theta,
                                          double dt, std::span<const double> sample_times,
                                          std::uint64_t seed, std::uint64_t stream = 0);

/// Euler-Maruyama integration of the noisy Kuramoto equation
/// dtheta_k = -(gamma_inj/2) sum_l J_kl sin(theta_k - theta_l) dt
///            + sqrt(D_theta) dW_k.
TrajectoryRecord simulate_kuramoto(const KuramotoParams& params,
                                   const PhaseConfig& initial, double dt,
                                   std::span<const double> sample_times,
                                   std::uint64_t seed, std::uint64_t stream = 0);

enum class SimModel { kuramoto, amplitude_phase, full_field };
enum class InitialPhases { uniform_random, aligned };

/// Description of one ensemble of statistically independent trajectories.
/// Trajectory i consumes counter-based RNG stream (master_seed,
/// stream_offset + i) and nothing else, so serial and parallel execution
/// produce bit-identical records.
struct EnsembleSpec {
  SimModel model = SimModel::kuramoto;
  std::optional<KuramotoParams> kuramoto;  ///< required for model == kuramoto
  std::optional<NetworkParams> network;    ///< required for the field models
  InitialPhases init = InitialPhases::uniform_random;
  double dt = 0.0;  ///< 0 selects the default step rule
  std::vector<double> sample_times;
  int n_trajectories = 1;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_offset = 0;

  void validate() const;
  double resolved_dt() const;
};

/// Runs the ensemble, parallel across trajectories. n_threads = 0 uses the
/// NOPOSIM_THREADS environment variable, falling back to the hardware count.
std::vector<TrajectoryRecord> ensemble_run(const EnsembleSpec& spec,
                                           int n_threads = 0);

/// Pooled ring relative phases of every trajectory's snapshot at time_index.
std::vector<double> collect_relative_phases(std::span<const TrajectoryRecord> records,
                                            std::size_t time_index);

int resolve_thread_count(int n_threads);

}  // namespace nopo
