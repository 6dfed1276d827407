#include "nopo/network.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

#include "nopo/errors.hpp"

namespace nopo {

void NetworkParams::validate() const {
  opo.validate();
  if (!(gamma_inj >= 0.0)) throw InvalidArgument("NetworkParams: gamma_inj >= 0");
  if (!(diffusion_d >= 0.0)) throw InvalidArgument("NetworkParams: diffusion_d >= 0");
}

bool NetworkParams::kuramoto_regime(double factor) const {
  return gamma_inj == 0.0 || opo.gamma_s >= factor * gamma_inj;
}

void KuramotoParams::validate() const {
  if (!(gamma_inj >= 0.0)) throw InvalidArgument("KuramotoParams: gamma_inj >= 0");
  if (!(d_theta >= 0.0)) throw InvalidArgument("KuramotoParams: d_theta >= 0");
}

double KuramotoParams::beta_set() const {
  if (!(d_theta > 0.0)) {
    throw InvalidArgument("KuramotoParams: beta_set undefined at d_theta = 0");
  }
  return gamma_inj / d_theta;
}

std::size_t TrajectoryRecord::index_of_time(double t) const {
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (std::abs(sample_times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
  }
  throw InvalidArgument("TrajectoryRecord: no snapshot at t = " + std::to_string(t));
}

double gamma_inj_from_transmittance(double transmittance, double round_trip_seconds) {
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw InvalidArgument("transmittance must lie in [0, 1]");
  }
  if (!(round_trip_seconds > 0.0)) {
    throw InvalidArgument("round trip time must be > 0");
  }
  return 2.0 * std::sqrt(transmittance) / round_trip_seconds;
}

double default_kuramoto_dt(const KuramotoParams& params) {
  params.validate();
  const double rate = std::max(
      params.gamma_inj * static_cast<double>(params.graph.max_degree()),
      params.d_theta);
  if (rate <= 0.0) return 1e-2;  // frozen dynamics, step size immaterial
  return 1e-2 / rate;
}

double default_network_dt(const NetworkParams& params) {
  params.validate();
  const double rate = std::max(
      {params.opo.gamma_s,
       params.gamma_inj * static_cast<double>(params.graph.max_degree()), 1e-300});
  return 1e-2 / rate;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string digest_params(const std::string& tag, const CouplingGraph& graph,
                          double a, double b, double c, double dt) {
  std::ostringstream os;
  os.precision(17);
  os << tag << '|' << graph.n_spins() << '|' << graph.n_edges();
  for (const Edge& e : graph.edges()) os << '|' << e.k << ',' << e.l << ',' << e.weight;
  os << '|' << a << '|' << b << '|' << c << '|' << dt;
  std::ostringstream hex;
  hex << std::hex << fnv1a(os.str());
  return hex.str();
}

/// Map requested sample times onto integration step indices.
std::vector<std::int64_t> sample_steps(std::span<const double> sample_times,
                                       double dt) {
  if (sample_times.empty()) {
    throw InvalidArgument("simulate: at least one sample time required");
  }
  std::vector<std::int64_t> steps;
  steps.reserve(sample_times.size());
  std::int64_t prev = -1;
  for (double t : sample_times) {
    if (!(t >= 0.0)) throw InvalidArgument("simulate: sample times must be >= 0");
    const auto s = static_cast<std::int64_t>(std::llround(t / dt));
    if (s <= prev) {
      throw InvalidArgument(
          "simulate: sample times must be strictly increasing on the dt grid");
    }
    steps.push_back(s);
    prev = s;
  }
  return steps;
}

void check_rate(double dt, double rate, const char* name) {
  if (dt * rate >= 0.1) {
    throw InvalidArgument(std::string("simulate: dt*") + name + " = " +
                          std::to_string(dt * rate) +
                          " violates the stability bound 0.1");
  }
}

TrajectoryRecord kuramoto_core(const KuramotoParams& params,
                               const PhaseConfig& initial, double dt,
                               std::span<const double> sample_times,
                               PhiloxRng& rng) {
  const auto steps = sample_steps(sample_times, dt);
  TrajectoryRecord rec;
  rec.params_digest = digest_params("kuramoto", params.graph, params.gamma_inj,
                                    params.d_theta, 0.0, dt);

  const std::size_t n = initial.n_spins();
  std::vector<double> theta(initial.angles().begin(), initial.angles().end());
  std::vector<double> drift(n, 0.0);
  const auto& edges = params.graph.edges();
  const double drift_scale = -0.5 * params.gamma_inj * dt;
  const double noise_std = std::sqrt(params.d_theta * dt);

  std::size_t next_sample = 0;
  auto maybe_record = [&](std::int64_t s) {
    while (next_sample < steps.size() && steps[next_sample] == s) {
      std::vector<double> wrapped(n);
      for (std::size_t k = 0; k < n; ++k) wrapped[k] = wrap_phase(theta[k]);
      rec.snapshots.emplace_back(std::move(wrapped));
      rec.sample_times.push_back(static_cast<double>(s) * dt);
      ++next_sample;
    }
  };
  maybe_record(0);
  const std::int64_t last = steps.back();
  for (std::int64_t step = 0; step < last;) {
    std::fill(drift.begin(), drift.end(), 0.0);
    for (const Edge& e : edges) {
      const double s = e.weight * std::sin(theta[e.k] - theta[e.l]);
      drift[e.k] += s;
      drift[e.l] -= s;
    }
    if (noise_std > 0.0) {
      for (std::size_t k = 0; k < n; ++k) {
        theta[k] += drift_scale * drift[k] + noise_std * rng.next_normal();
      }
    } else {
      for (std::size_t k = 0; k < n; ++k) theta[k] += drift_scale * drift[k];
    }
    ++step;
    maybe_record(step);
  }
  return rec;
}

TrajectoryRecord full_network_core(const NetworkParams& params,
                                   std::span<const std::complex<double>> initial,
                                   double dt, std::span<const double> sample_times,
                                   PhiloxRng& rng) {
  const std::size_t n = params.graph.n_spins();
  const double n0 = saturation_photon_number(params.opo);
  const double r = pump_ratio(params.opo);
  const auto steps = sample_steps(sample_times, dt);

  TrajectoryRecord rec;
  rec.params_digest = digest_params("full", params.graph, params.gamma_inj,
                                    params.diffusion_d, params.opo.pump_amplitude, dt);

  std::vector<std::complex<double>> a(initial.begin(), initial.end());
  std::vector<std::complex<double>> drift(n);
  const auto& edges = params.graph.edges();
  const double noise_std = std::sqrt(params.diffusion_d * dt);

  std::size_t next_sample = 0;
  auto maybe_record = [&](std::int64_t s) {
    while (next_sample < steps.size() && steps[next_sample] == s) {
      std::vector<double> phases(n);
      std::vector<double> photons(n);
      for (std::size_t k = 0; k < n; ++k) {
        phases[k] = std::arg(a[k]);
        photons[k] = std::norm(a[k]);
      }
      rec.snapshots.emplace_back(std::move(phases));
      rec.photon_numbers.push_back(std::move(photons));
      rec.sample_times.push_back(static_cast<double>(s) * dt);
      ++next_sample;
    }
  };
  maybe_record(0);
  const std::int64_t last = steps.back();
  for (std::int64_t step = 0; step < last;) {
    for (std::size_t k = 0; k < n; ++k) {
      const double gain = gain_saturation(std::norm(a[k]) / n0) * r;
      const double g4 = gain * gain * gain * gain;
      drift[k] = 0.5 * params.opo.gamma_s * (g4 - 1.0) * a[k];
    }
    for (const Edge& e : edges) {
      drift[e.k] += 0.5 * params.gamma_inj * e.weight * a[e.l];
      drift[e.l] += 0.5 * params.gamma_inj * e.weight * a[e.k];
    }
    if (noise_std > 0.0) {
      for (std::size_t k = 0; k < n; ++k) {
        a[k] += dt * drift[k] + std::complex<double>(noise_std * rng.next_normal(),
                                                     noise_std * rng.next_normal());
      }
    } else {
      for (std::size_t k = 0; k < n; ++k) a[k] += dt * drift[k];
    }
    ++step;
    if ((step & 1023) == 0 || step == last) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(std::norm(a[k]))) {
          throw NumericError("simulate_full_network: field diverged at step " +
                             std::to_string(step));
        }
      }
    }
    maybe_record(step);
  }
  return rec;
}

/// One Euler-Maruyama sub-step of the split dynamics; returns false if any
/// photon number would leave (0, inf).
bool split_step(const NetworkParams& params, double n0, double r, double h,
                std::vector<double>& n, std::vector<double>& theta,
                std::vector<double>& dn, std::vector<double>& dtheta,
                PhiloxRng& rng) {
  const std::size_t n_spins = n.size();
  for (std::size_t k = 0; k < n_spins; ++k) {
    const double gain = gain_saturation(n[k] / n0) * r;
    const double g4 = gain * gain * gain * gain;
    dn[k] = params.opo.gamma_s * (g4 - 1.0) * n[k] + 2.0 * params.diffusion_d;
    dtheta[k] = 0.0;
  }
  for (const Edge& e : params.graph.edges()) {
    const double root = std::sqrt(n[e.k] * n[e.l]);
    const double diff = theta[e.k] - theta[e.l];
    const double c = params.gamma_inj * e.weight * root * std::cos(diff);
    dn[e.k] += c;
    dn[e.l] += c;
    const double s = 0.5 * params.gamma_inj * e.weight * root * std::sin(diff);
    // sqrt(n_l/n_k) J sin inside the sum over l = sqrt(n_k n_l) J sin / n_k.
    dtheta[e.k] -= s / n[e.k];
    dtheta[e.l] += s / n[e.l];
  }
  const double sqrt_h = std::sqrt(h);
  for (std::size_t k = 0; k < n_spins; ++k) {
    const double zn = rng.next_normal();
    const double zt = rng.next_normal();
    const double n_new = n[k] + h * dn[k] +
                         2.0 * std::sqrt(params.diffusion_d * n[k]) * sqrt_h * zn;
    if (!(n_new > 0.0) || !std::isfinite(n_new)) return false;
    theta[k] += h * dtheta[k] +
                std::sqrt(params.diffusion_d / n[k]) * sqrt_h * zt;
    n[k] = n_new;
  }
  return true;
}

TrajectoryRecord amplitude_phase_core(const NetworkParams& params,
                                      std::span<const double> initial_n,
                                      const PhaseConfig& initial_theta, double dt,
                                      std::span<const double> sample_times,
                                      PhiloxRng& rng) {
  const std::size_t n_spins = params.graph.n_spins();
  const double n0 = saturation_photon_number(params.opo);
  const double r = pump_ratio(params.opo);
  const auto steps = sample_steps(sample_times, dt);

  TrajectoryRecord rec;
  rec.params_digest = digest_params("split", params.graph, params.gamma_inj,
                                    params.diffusion_d, params.opo.pump_amplitude, dt);

  std::vector<double> n(initial_n.begin(), initial_n.end());
  std::vector<double> theta(initial_theta.angles().begin(),
                            initial_theta.angles().end());
  std::vector<double> dn(n_spins), dtheta(n_spins);
  std::vector<double> n_backup(n_spins), theta_backup(n_spins);

  std::size_t next_sample = 0;
  auto maybe_record = [&](std::int64_t s) {
    while (next_sample < steps.size() && steps[next_sample] == s) {
      std::vector<double> wrapped(n_spins);
      for (std::size_t k = 0; k < n_spins; ++k) wrapped[k] = wrap_phase(theta[k]);
      rec.snapshots.emplace_back(std::move(wrapped));
      rec.photon_numbers.push_back(n);
      rec.sample_times.push_back(static_cast<double>(s) * dt);
      ++next_sample;
    }
  };
  maybe_record(0);
  const std::int64_t last = steps.back();
  for (std::int64_t step = 0; step < last; ++step) {
    // Attempt the full step; on a photon-number sign failure redo it with
    // halved sub-steps and fresh noise, up to 10 halvings.
    double h = dt;
    int substeps = 1;
    int halvings = 0;
    for (;;) {
      n_backup = n;
      theta_backup = theta;
      bool ok = true;
      for (int s = 0; s < substeps && ok; ++s) {
        ok = split_step(params, n0, r, h, n, theta, dn, dtheta, rng);
      }
      if (ok) break;
      n = n_backup;
      theta = theta_backup;
      ++halvings;
      if (halvings > 10) {
        throw NumericError(
            "simulate_amplitude_phase: photon number hit zero at step " +
            std::to_string(step) + " despite 10 dt halvings");
      }
      h *= 0.5;
      substeps *= 2;
    }
    maybe_record(step + 1);
  }
  return rec;
}

}  // namespace

TrajectoryRecord simulate_kuramoto(const KuramotoParams& params,
                                   const PhaseConfig& initial, double dt,
                                   std::span<const double> sample_times,
                                   std::uint64_t seed, std::uint64_t stream) {
  params.validate();
  if (initial.n_spins() != params.graph.n_spins()) {
    throw InvalidArgument("simulate_kuramoto: initial size does not match graph");
  }
  if (!(dt > 0.0)) throw InvalidArgument("simulate_kuramoto: dt > 0");
  check_rate(dt, params.gamma_inj * static_cast<double>(params.graph.max_degree()),
             "gamma_inj*degree");
  check_rate(dt, params.d_theta, "d_theta");
  PhiloxRng rng(seed, stream);
  auto rec = kuramoto_core(params, initial, dt, sample_times, rng);
  rec.seed = seed;
  rec.stream = stream;
  return rec;
}

TrajectoryRecord simulate_full_network(const NetworkParams& params,
                                       std::span<const std::complex<double>> initial,
                                       double dt, std::span<const double> sample_times,
                                       std::uint64_t seed, std::uint64_t stream) {
  params.validate();
  if (initial.size() != params.graph.n_spins()) {
    throw InvalidArgument("simulate_full_network: initial size does not match graph");
  }
  if (!(dt > 0.0)) throw InvalidArgument("simulate_full_network: dt > 0");
  check_rate(dt, params.opo.gamma_s, "gamma_s");
  check_rate(dt, params.gamma_inj * static_cast<double>(params.graph.max_degree()),
             "gamma_inj*degree");
  PhiloxRng rng(seed, stream);
  auto rec = full_network_core(params, initial, dt, sample_times, rng);
  rec.seed = seed;
  rec.stream = stream;
  return rec;
}

TrajectoryRecord simulate_amplitude_phase(const NetworkParams& params,
                                          std::span<const double> initial_n,
                                          const PhaseConfig& initial_theta,
                                          double dt, std::span<const double> sample_times,
                                          std::uint64_t seed, std::uint64_t stream) {
  params.validate();
  const std::size_t n_spins = params.graph.n_spins();
  if (initial_n.size() != n_spins || initial_theta.n_spins() != n_spins) {
    throw InvalidArgument("simulate_amplitude_phase: initial size mismatch");
  }
  for (double v : initial_n) {
    if (!(v > 0.0)) {
      throw InvalidArgument("simulate_amplitude_phase: photon numbers must be > 0");
    }
  }
  if (!(dt > 0.0)) throw InvalidArgument("simulate_amplitude_phase: dt > 0");
  check_rate(dt, params.opo.gamma_s, "gamma_s");
  check_rate(dt, params.gamma_inj * static_cast<double>(params.graph.max_degree()),
             "gamma_inj*degree");
  PhiloxRng rng(seed, stream);
  auto rec = amplitude_phase_core(params, initial_n, initial_theta, dt,
                                  sample_times, rng);
  rec.seed = seed;
  rec.stream = stream;
  return rec;
}

void EnsembleSpec::validate() const {
  if (model == SimModel::kuramoto) {
    if (!kuramoto) throw InvalidArgument("EnsembleSpec: kuramoto params missing");
    kuramoto->validate();
  } else {
    if (!network) throw InvalidArgument("EnsembleSpec: network params missing");
    network->validate();
    if (pump_ratio(network->opo) <= 1.0) {
      throw InvalidArgument(
          "EnsembleSpec: field models need an above-threshold pump "
          "(pump_ratio > 1)");
    }
  }
  if (n_trajectories < 1) throw InvalidArgument("EnsembleSpec: n_trajectories >= 1");
  if (sample_times.empty()) throw InvalidArgument("EnsembleSpec: sample_times empty");
  for (std::size_t i = 1; i < sample_times.size(); ++i) {
    if (!(sample_times[i] > sample_times[i - 1])) {
      throw InvalidArgument("EnsembleSpec: sample_times must be strictly increasing");
    }
  }
}

double EnsembleSpec::resolved_dt() const {
  if (dt > 0.0) return dt;
  if (model == SimModel::kuramoto) return default_kuramoto_dt(*kuramoto);
  return default_network_dt(*network);
}

int resolve_thread_count(int n_threads) {
  if (n_threads > 0) return n_threads;
  if (const char* env = std::getenv("NOPOSIM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<TrajectoryRecord> ensemble_run(const EnsembleSpec& spec, int n_threads) {
  spec.validate();
  const double dt = spec.resolved_dt();
  const std::size_t n_spins = spec.model == SimModel::kuramoto
                                  ? spec.kuramoto->graph.n_spins()
                                  : spec.network->graph.n_spins();
  // Fail fast on step-size problems before spawning workers.
  if (spec.model == SimModel::kuramoto) {
    check_rate(dt, spec.kuramoto->gamma_inj *
                       static_cast<double>(spec.kuramoto->graph.max_degree()),
               "gamma_inj*degree");
    check_rate(dt, spec.kuramoto->d_theta, "d_theta");
  } else {
    check_rate(dt, spec.network->opo.gamma_s, "gamma_s");
    check_rate(dt, spec.network->gamma_inj *
                       static_cast<double>(spec.network->graph.max_degree()),
               "gamma_inj*degree");
  }

  auto run_one = [&](std::uint64_t index) -> TrajectoryRecord {
    const std::uint64_t stream = spec.stream_offset + index;
    PhiloxRng rng(spec.master_seed, stream);
    PhaseConfig theta = spec.init == InitialPhases::uniform_random
                            ? PhaseConfig::uniform_random(n_spins, rng)
                            : PhaseConfig(n_spins);
    TrajectoryRecord rec;
    if (spec.model == SimModel::kuramoto) {
      rec = kuramoto_core(*spec.kuramoto, theta, dt, spec.sample_times, rng);
    } else {
      const double n_ss = steady_state_photon_number(spec.network->opo);
      if (spec.model == SimModel::full_field) {
        std::vector<std::complex<double>> a(n_spins);
        for (std::size_t k = 0; k < n_spins; ++k) {
          a[k] = std::polar(std::sqrt(n_ss), theta[k]);
        }
        rec = full_network_core(*spec.network, a, dt, spec.sample_times, rng);
      } else {
        std::vector<double> n(n_spins, n_ss);
        rec = amplitude_phase_core(*spec.network, n, theta, dt, spec.sample_times,
                                   rng);
      }
    }
    rec.seed = spec.master_seed;
    rec.stream = stream;
    return rec;
  };

  std::vector<TrajectoryRecord> records(static_cast<std::size_t>(spec.n_trajectories));
  const int workers = std::min(resolve_thread_count(n_threads), spec.n_trajectories);
  if (workers <= 1) {
    for (int i = 0; i < spec.n_trajectories; ++i) {
      records[static_cast<std::size_t>(i)] = run_one(static_cast<std::uint64_t>(i));
    }
    return records;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= spec.n_trajectories) return;
      try {
        records[static_cast<std::size_t>(i)] = run_one(static_cast<std::uint64_t>(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

std::vector<double> collect_relative_phases(std::span<const TrajectoryRecord> records,
                                            std::size_t time_index) {
  std::vector<double> pool;
  for (const TrajectoryRecord& rec : records) {
    if (time_index >= rec.snapshots.size()) {
      throw InvalidArgument("collect_relative_phases: time index out of range");
    }
    const auto rel = ring_relative_phases(rec.snapshots[time_index]);
    pool.insert(pool.end(), rel.begin(), rel.end());
  }
  return pool;
}

}  // namespace nopo
