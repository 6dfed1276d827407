#include "nopo/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "nopo/analytics.hpp"
#include "nopo/errors.hpp"
#include "nopo/estimation.hpp"
#include "nopo/mcmc.hpp"
#include "nopo/network.hpp"

namespace nopo {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Operating point of one sweep entry, with every rate resolved.
struct SweepPoint {
  double beta_set = 0.0;
  double gamma_inj = 0.0;
  double d_theta = 0.0;    // kuramoto
  double diffusion_d = 0.0;  // field models
};

std::vector<SweepPoint> resolve_sweep(const ExperimentSpec& spec) {
  std::vector<SweepPoint> points;
  const bool field_model = spec.model == "split" || spec.model == "full";
  if (spec.beta_set.empty()) {
    SweepPoint p;
    p.gamma_inj = spec.resolved_gamma_inj();
    if (field_model) {
      p.diffusion_d = *spec.noise_d;
      p.d_theta = p.diffusion_d / spec.opo_n_ss;
    } else {
      p.d_theta = *spec.d_theta;
    }
    p.beta_set = p.d_theta > 0.0 ? p.gamma_inj / p.d_theta : 0.0;
    points.push_back(p);
    return points;
  }
  for (double beta : spec.beta_set) {
    SweepPoint p;
    p.beta_set = beta;
    if (spec.sweep_vary == "gamma_inj") {
      if (field_model) {
        p.diffusion_d = *spec.noise_d;
        p.d_theta = p.diffusion_d / spec.opo_n_ss;
      } else {
        p.d_theta = *spec.d_theta;
      }
      p.gamma_inj = beta * p.d_theta;
    } else {
      p.gamma_inj = spec.resolved_gamma_inj();
      p.d_theta = p.gamma_inj / beta;
      p.diffusion_d = p.d_theta * spec.opo_n_ss;
    }
    points.push_back(p);
  }
  return points;
}

std::string samples_path_for(const ExperimentSpec& spec, std::size_t index,
                             std::size_t n_points) {
  namespace fs = std::filesystem;
  std::string name = spec.samples_filename;
  if (n_points > 1) {
    const auto dot = name.rfind('.');
    const std::string suffix = "_b" + std::to_string(index);
    if (dot == std::string::npos) {
      name += suffix;
    } else {
      name = name.substr(0, dot) + suffix + name.substr(dot);
    }
  }
  return (fs::path(spec.out_dir) / name).string();
}

void write_samples_csv(const std::string& path,
                       std::span<const TrajectoryRecord> records,
                       bool with_photons) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write samples file '" + path + "'");
  out << "trajectory_id,t_a_seconds,k,theta_k,theta_rel_k";
  if (with_photons) out << ",n_k";
  out << "\n";
  for (std::size_t traj = 0; traj < records.size(); ++traj) {
    const auto& rec = records[traj];
    for (std::size_t j = 0; j < rec.sample_times.size(); ++j) {
      const auto& snapshot = rec.snapshots[j];
      const auto rel = ring_relative_phases(snapshot);
      for (std::size_t k = 0; k < snapshot.n_spins(); ++k) {
        out << traj << ',' << fmt_double(rec.sample_times[j]) << ',' << k << ','
            << fmt_double(snapshot[k]) << ',' << fmt_double(rel[k]);
        if (with_photons) out << ',' << fmt_double(rec.photon_numbers[j][k]);
        out << "\n";
      }
    }
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

nlohmann::json reference_block(std::size_t n_spins, double beta) {
  nlohmann::json ref;
  ref["mean_energy_per_spin"] = mean_energy_approx(n_spins, beta) /
                                static_cast<double>(n_spins);
  constexpr int kBins = 36;
  auto centers = nlohmann::json::array();
  auto density = nlohmann::json::array();
  for (int b = 0; b < kBins; ++b) {
    const double c = -kPi + (b + 0.5) * kTwoPi / kBins;
    centers.push_back(c);
    density.push_back(relative_phase_pdf_approx(c, beta));
  }
  ref["pdf_bin_centers"] = centers;
  ref["pdf_density"] = density;
  return ref;
}

nlohmann::json simulate_sweep_point(const ExperimentSpec& spec,
                                    const SweepPoint& point, std::size_t index,
                                    std::size_t n_points,
                                    std::vector<std::string>& sample_paths) {
  const auto graph = CouplingGraph::ring(spec.ring_n, spec.ring_j);
  EnsembleSpec ens;
  if (spec.model == "kuramoto") {
    ens.model = SimModel::kuramoto;
    ens.kuramoto = KuramotoParams{point.gamma_inj, point.d_theta, graph};
  } else {
    ens.model = spec.model == "split" ? SimModel::amplitude_phase
                                      : SimModel::full_field;
    ens.network = NetworkParams{
        design_opo_params(spec.opo_gamma_s, spec.opo_pump_ratio, spec.opo_n_ss,
                          spec.opo_rate_separation),
        point.gamma_inj, point.diffusion_d, graph};
  }
  ens.init = spec.init == "aligned" ? InitialPhases::aligned
                                    : InitialPhases::uniform_random;
  ens.dt = spec.dt;
  ens.sample_times = spec.t_a;
  ens.n_trajectories = spec.n_trajectories;
  ens.master_seed = spec.seed;
  ens.stream_offset = static_cast<std::uint64_t>(index) << 32;

  const auto records = ensemble_run(ens, spec.threads);

  const std::string path = samples_path_for(spec, index, n_points);
  write_samples_csv(path, records, spec.model != "kuramoto");
  sample_paths.push_back(path);

  nlohmann::json entry;
  entry["beta_set"] = point.beta_set;
  entry["gamma_inj_hz"] = point.gamma_inj;
  if (spec.model == "kuramoto") {
    entry["d_theta_hz"] = point.d_theta;
  } else {
    entry["diffusion_d"] = point.diffusion_d;
    entry["d_theta_hz"] = point.d_theta;
    entry["n_ss"] = spec.opo_n_ss;
  }
  entry["dt_seconds"] = ens.resolved_dt();
  entry["samples_file"] = std::filesystem::path(path).filename().string();
  entry["reference"] = reference_block(spec.ring_n, point.beta_set);

  auto points_json = nlohmann::json::array();
  for (std::size_t j = 0; j < spec.t_a.size(); ++j) {
    nlohmann::json pj;
    pj["t_a_seconds"] = spec.t_a[j];
    pj["t_a_actual_seconds"] = records.front().sample_times[j];
    const auto rel = collect_relative_phases(records, j);
    const auto beta_est = estimate_beta(rel, BetaMethod::mle);
    pj["beta_eff"] = beta_est.beta_eff;
    pj["beta_eff_std_error"] = beta_est.std_error;
    pj["n_phase_samples"] = beta_est.n_samples;
    const auto energy = mean_energy_of_samples(
        records, graph, records.front().sample_times[j]);
    pj["mean_energy"] = energy.mean;
    pj["mean_energy_per_spin"] = energy.mean / static_cast<double>(spec.ring_n);
    pj["energy_std_dev"] = energy.std_dev;
    pj["n_energy_samples"] = energy.n_samples;
    points_json.push_back(pj);
  }
  entry["points"] = points_json;
  return entry;
}

nlohmann::json mcmc_sweep_point(const ExperimentSpec& spec, double beta,
                                std::size_t index, std::size_t n_points,
                                std::vector<std::string>& sample_paths) {
  const auto graph = CouplingGraph::ring(spec.ring_n, spec.ring_j);
  McmcConfig mc;
  mc.beta = beta;
  mc.proposal_width = spec.mcmc_width;
  mc.n_sweeps = spec.mcmc_sweeps;
  mc.burn_in = spec.mcmc_burn_in;
  mc.thin = spec.mcmc_thin;
  mc.auto_tune = spec.mcmc_auto_tune;
  mc.seed = spec.seed + (static_cast<std::uint64_t>(index) << 32);
  const auto chain = sample_chain(mc, graph);

  // Each kept configuration is one CSV "trajectory"; sweeps have no
  // physical clock, so the time column is fixed at zero.
  std::vector<TrajectoryRecord> records(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    records[i].sample_times = {0.0};
    records[i].snapshots.push_back(chain[i]);
  }
  const std::string path = samples_path_for(spec, index, n_points);
  write_samples_csv(path, records, false);
  sample_paths.push_back(path);

  nlohmann::json entry;
  entry["beta_set"] = beta;
  entry["samples_file"] = std::filesystem::path(path).filename().string();
  entry["sweeps"] = spec.mcmc_sweeps;
  entry["thin"] = spec.mcmc_thin;
  entry["reference"] = reference_block(spec.ring_n, beta);

  std::vector<double> rel;
  for (const auto& c : chain) {
    const auto r = ring_relative_phases(c);
    rel.insert(rel.end(), r.begin(), r.end());
  }
  const auto beta_est = estimate_beta(rel, BetaMethod::mle);
  const auto energy = mean_energy_of_samples(records, graph, 0.0);
  nlohmann::json pj;
  pj["beta_eff"] = beta_est.beta_eff;
  pj["beta_eff_std_error"] = beta_est.std_error;
  pj["n_phase_samples"] = beta_est.n_samples;
  pj["mean_energy"] = energy.mean;
  pj["mean_energy_per_spin"] = energy.mean / static_cast<double>(spec.ring_n);
  pj["energy_std_dev"] = energy.std_dev;
  pj["n_energy_samples"] = energy.n_samples;
  entry["points"] = nlohmann::json::array({pj});
  return entry;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& requested) {
  ExperimentSpec spec = requested;
  if (spec.paper_scale) {
    spec.ring_n = 5000;
    spec.n_trajectories = 1000;
    std::cerr << "noposim: --paper-scale selects N = 5000 with 1000 "
                 "trajectories; expect days of CPU time for second-long "
                 "acquisition windows\n";
  }
  spec.validate();

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(spec.out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + spec.out_dir +
                  "': " + ec.message());
  }

  nlohmann::json summary;
  summary["schema"] = "noposim-summary-v1";
  summary["model"] = spec.model;
  summary["graph"] = {{"type", "ring"},
                      {"n", spec.ring_n},
                      {"j", spec.ring_j}};
  summary["seed"] = spec.seed;
  summary["n_trajectories"] = spec.n_trajectories;
  summary["init"] = spec.init;
  if (spec.transmittance) {
    summary["transmittance"] = *spec.transmittance;
    summary["round_trip_seconds"] = spec.round_trip;
    summary["gamma_inj_hz"] = spec.resolved_gamma_inj();
  }

  ExperimentResult result;
  auto results_json = nlohmann::json::array();
  if (spec.model == "mcmc") {
    std::vector<double> betas = spec.beta_set;
    if (betas.empty()) betas.push_back(*spec.gamma_inj / *spec.d_theta);
    for (std::size_t i = 0; i < betas.size(); ++i) {
      results_json.push_back(
          mcmc_sweep_point(spec, betas[i], i, betas.size(), result.samples_paths));
    }
  } else {
    const auto points = resolve_sweep(spec);
    for (std::size_t i = 0; i < points.size(); ++i) {
      results_json.push_back(simulate_sweep_point(spec, points[i], i,
                                                  points.size(),
                                                  result.samples_paths));
    }
  }
  summary["results"] = results_json;

  result.summary_json = summary.dump(2) + "\n";
  result.summary_path =
      (fs::path(spec.out_dir) / spec.summary_filename).string();
  std::ofstream out(result.summary_path, std::ios::binary);
  if (!out) throw IoError("cannot write summary '" + result.summary_path + "'");
  out << result.summary_json;
  return result;
}

std::string analytics_table_csv(std::span<const double> betas,
                                std::span<const std::size_t> n_values,
                                int n_max) {
  if (betas.empty() || n_values.empty()) {
    throw InvalidArgument("analytics table: beta and N grids must be nonempty");
  }
  std::string csv =
      "N,beta,log_Z,mean_energy_exact,mean_energy_approx,max_pdf_gap\n";
  for (std::size_t n : n_values) {
    for (double beta : betas) {
      const RingSpec ring{n, beta};
      double gap = 0.0;
      for (int i = 0; i < 720; ++i) {
        const double t = -kPi + (i + 0.5) * kTwoPi / 720;
        gap = std::max(gap, std::abs(relative_phase_pdf_exact(t, ring, n_max) -
                                     relative_phase_pdf_approx(t, beta)));
      }
      csv += std::to_string(n) + ',' + fmt_double(beta) + ',' +
             fmt_double(log_partition_function(ring, n_max)) + ',' +
             fmt_double(mean_energy_exact(ring, n_max)) + ',' +
             fmt_double(mean_energy_approx(n, beta)) + ',' + fmt_double(gap) +
             "\n";
    }
  }
  return csv;
}

}  // namespace nopo
