#include "nopo/validate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <json.hpp>

#include "nopo/analytics.hpp"
#include "nopo/errors.hpp"
#include "nopo/estimation.hpp"
#include "nopo/mcmc.hpp"
#include "nopo/network.hpp"
#include "nopo/opo.hpp"
#include "nopo/xy.hpp"

namespace nopo {

namespace {

void add_check(SuiteReport& report, const std::string& name, double value,
               double threshold, bool less_is_pass, std::string detail = {}) {
  CheckResult c;
  c.name = name;
  c.value = value;
  c.threshold = threshold;
  c.passed = less_is_pass ? value < threshold : value >= threshold;
  c.detail = std::move(detail);
  report.checks.push_back(std::move(c));
}

OpoParams normalized_opo(double pump_ratio_target) {
  OpoParams p;
  p.gamma_s = 1e-3;
  p.gamma_i = 1.0;
  p.gamma_p = 1.0;
  p.kappa = 1.0;
  p.pump_amplitude = 1.0;
  p.pump_amplitude = pump_ratio_target * threshold_pump(p);
  return p;
}

void opo_suite(SuiteReport& report, bool quick) {
  double worst = 0.0;
  for (double r : {1.1, 1.5, 2.0, 5.0}) {
    const auto p = normalized_opo(r);
    const double x = steady_state_photon_number(p) / saturation_photon_number(p);
    worst = std::max(worst, std::abs(gain_saturation(x) * r - 1.0));
  }
  add_check(report, "fixed_point_identity", worst, 1e-10, true,
            "max |s(n_ss/n0) r - 1| over r in {1.1,1.5,2,5}");

  double monotone_ok = 1.0;
  double prev = gain_saturation(1e-6);
  for (double x = 1.3e-6; x < 1e6; x *= 1.3) {
    const double s = gain_saturation(x);
    if (!(s > 0.0 && s <= 1.0 && s < prev)) monotone_ok = 0.0;
    prev = s;
  }
  add_check(report, "saturation_monotone_decreasing", monotone_ok, 1.0, false);

  double threshold_ok = 1.0;
  if (steady_state_photon_number(normalized_opo(0.8)) != 0.0) threshold_ok = 0.0;
  if (steady_state_photon_number(normalized_opo(1.0)) != 0.0) threshold_ok = 0.0;
  if (steady_state_photon_number(normalized_opo(1.0 + 1e-10)) > 1e-6) {
    threshold_ok = 0.0;
  }
  double n_prev = 0.0;
  for (double r = 1.05; r < 6.0; r += 0.25) {
    const double n = steady_state_photon_number(normalized_opo(r));
    if (n <= n_prev) threshold_ok = 0.0;
    n_prev = n;
  }
  add_check(report, "threshold_behavior", threshold_ok, 1.0, false,
            "zero at/below threshold, continuous, increasing above");

  // Adiabatic elimination: three-field steady state against the reduced
  // closed form at gamma_s/gamma_p = 1e-3.
  {
    const auto p = normalized_opo(2.0);
    const double n_ss = steady_state_photon_number(p);
    ThreeFieldState init;
    init.pump = 2.0 * p.pump_amplitude / std::sqrt(p.gamma_p);
    init.signal = {1e-3, 0.0};
    init.idler = p.kappa / p.gamma_i * std::conj(init.signal) * init.pump * init.pump;
    const double dt = 5e-3;
    const double horizon = quick ? 15.0 : 30.0;
    const int steps = static_cast<int>(horizon / p.gamma_s / dt);
    const auto traj = integrate_three_field(init, p, dt, steps);
    const double err = std::abs(std::norm(traj.back().signal) - n_ss) / n_ss;
    add_check(report, "adiabatic_limit", err, 0.01, true,
              "three-field vs reduced steady state, rate ratio 1e-3, r = 2");
  }

  {
    const auto p = normalized_opo(1.5);
    const double n_ss = steady_state_photon_number(p);
    const auto traj = integrate_signal_scalar({0.02, 0.01}, p, 1.0,
                                              static_cast<int>(60.0 / p.gamma_s));
    const double err = std::abs(std::norm(traj.back()) - n_ss) / n_ss;
    add_check(report, "scalar_reduction_convergence", err, 1e-6, true);
  }
}

/// Direct grid quadrature over the ring's bond angles; shares nothing with
/// the Bessel machinery it certifies.
struct QuadratureResult {
  double log_z = 0.0;
  double mean_energy = 0.0;
  double pdf_max_gap = 0.0;  // vs relative_phase_pdf_exact on the grid
};

QuadratureResult quadrature_reference(int n_spins, double beta, int points) {
  const int bonds = n_spins - 1;
  const double h = kTwoPi / points;
  std::vector<int> idx(static_cast<std::size_t>(bonds), 0);
  std::vector<double> marginal(static_cast<std::size_t>(points), 0.0);
  double z = 0.0, e_acc = 0.0;
  for (;;) {
    double sum_u = 0.0, energy = 0.0;
    for (int b = 0; b < bonds; ++b) {
      const double u = -kPi + idx[static_cast<std::size_t>(b)] * h;
      sum_u += u;
      energy -= std::cos(u);
    }
    energy -= std::cos(sum_u);
    const double w = std::exp(-beta * energy);
    z += w;
    e_acc += w * energy;
    marginal[static_cast<std::size_t>(idx[0])] += w;
    int b = 0;
    for (; b < bonds; ++b) {
      if (++idx[static_cast<std::size_t>(b)] < points) break;
      idx[static_cast<std::size_t>(b)] = 0;
    }
    if (b == bonds) break;
  }
  QuadratureResult q;
  q.log_z = std::log(z * std::pow(h, bonds) * kTwoPi) -
            static_cast<double>(n_spins) * std::log(kTwoPi);
  q.mean_energy = e_acc / z;
  for (int i = 0; i < points; ++i) {
    const double t = -kPi + i * h;
    const double density = marginal[static_cast<std::size_t>(i)] / (z * h);
    q.pdf_max_gap =
        std::max(q.pdf_max_gap,
                 std::abs(density - relative_phase_pdf_exact(
                                        t, {static_cast<std::size_t>(n_spins), beta})));
  }
  return q;
}

void analytics_suite(SuiteReport& report, bool quick) {
  const int points3 = quick ? 256 : 2048;
  const int points4 = quick ? 96 : 160;
  double worst_z = 0.0, worst_e = 0.0, worst_pdf = 0.0;
  for (double beta : {0.5, 1.0, 2.0}) {
    const auto q3 = quadrature_reference(3, beta, points3);
    worst_z = std::max(worst_z, std::abs(log_partition_function({3, beta}) - q3.log_z) /
                                    std::abs(q3.log_z));
    worst_e = std::max(worst_e, std::abs(mean_energy_exact({3, beta}) - q3.mean_energy) /
                                    std::abs(q3.mean_energy));
    worst_pdf = std::max(worst_pdf, q3.pdf_max_gap);

    const auto q4 = quadrature_reference(4, beta, points4);
    worst_z = std::max(worst_z, std::abs(log_partition_function({4, beta}) - q4.log_z) /
                                    std::abs(q4.log_z));
    worst_e = std::max(worst_e, std::abs(mean_energy_exact({4, beta}) - q4.mean_energy) /
                                    std::abs(q4.mean_energy));
    worst_pdf = std::max(worst_pdf, q4.pdf_max_gap);
  }
  add_check(report, "transfer_matrix_log_z_vs_quadrature", worst_z, 1e-6, true,
            "N in {3,4}, beta in {0.5,1,2}");
  add_check(report, "transfer_matrix_energy_vs_quadrature", worst_e, 1e-6, true);
  add_check(report, "transfer_matrix_pdf_vs_quadrature", worst_pdf, 1e-6, true);

  double collapse = 0.0;
  for (double beta : {1.0, 10.0, 31.0}) {
    collapse = std::max(collapse,
                        std::abs(mean_energy_exact({5000, beta}) / 5000.0 -
                                 mean_energy_approx(5000, beta) / 5000.0));
    for (double t = -kPi; t < kPi; t += 0.1) {
      collapse = std::max(collapse, std::abs(relative_phase_pdf_exact(t, {5000, beta}) -
                                             relative_phase_pdf_approx(t, beta)));
    }
  }
  add_check(report, "large_n_collapse", collapse, 1e-10, true,
            "exact vs von Mises forms at N = 5000, beta <= 31");

  double recurrence = 0.0;
  for (auto [n, x] : {std::pair{1, 2.0}, std::pair{5, 10.0}, std::pair{3, 31.0}}) {
    const double lhs = bessel_i(n - 1, x) - bessel_i(n + 1, x);
    const double rhs = 2.0 * n / x * bessel_i(n, x);
    recurrence = std::max(recurrence, std::abs(lhs - rhs) / std::abs(rhs));
  }
  add_check(report, "bessel_recurrence_identity", recurrence, 1e-10, true);
}

void estimation_suite(SuiteReport& report, bool quick) {
  {
    DecayCurve curve;
    for (int i = 0; i <= 12; ++i) {
      const double t = i * 4e-4;
      curve.times.push_back(t);
      curve.mean_cosine.push_back(std::exp(-440.0 * t));
      curve.n_samples.push_back(1000);
    }
    const auto fit = fit_diffusion(curve);
    add_check(report, "diffusion_fit_synthetic", std::abs(fit.d_theta - 440.0) / 440.0,
              1e-6, true, "exact exp(-0.44 kHz t) trace");
  }

  const std::size_t m = quick ? 20000 : 100000;
  {
    PhiloxRng rng(424242, 0);
    std::vector<double> samples(m);
    for (double& s : samples) s = sample_von_mises(31.0, rng);
    const auto est = estimate_beta(samples);
    add_check(report, "mle_recovers_beta_31", std::abs(est.beta_eff - 31.0),
              3.0 * est.std_error, true,
              "beta_eff = " + std::to_string(est.beta_eff) + " +- " +
                  std::to_string(est.std_error));
  }
  {
    PhiloxRng rng(515151, 0);
    std::vector<double> samples(m);
    for (double& s : samples) s = rng.next_uniform(-kPi, kPi);
    const auto est = estimate_beta(samples);
    add_check(report, "mle_uniform_gives_zero", est.beta_eff,
              3.0 * est.std_error + 0.02, true);
  }
  {
    PhiloxRng rng(616161, 0);
    std::vector<double> samples(m);
    for (double& s : samples) s = sample_von_mises(5.0, rng);
    const auto mle = estimate_beta(samples, BetaMethod::mle);
    const auto hist = estimate_beta(samples, BetaMethod::histogram_fit);
    const double combined = std::sqrt(mle.std_error * mle.std_error +
                                      hist.std_error * hist.std_error);
    add_check(report, "mle_histogram_agreement", std::abs(mle.beta_eff - hist.beta_eff),
              3.0 * combined + 0.25, true);
  }
  {
    // Gaussian identity <cos X> = exp(-Var/2) realized by pure phase diffusion.
    EnsembleSpec spec;
    spec.model = SimModel::kuramoto;
    spec.kuramoto = KuramotoParams{0.0, 1000.0, CouplingGraph::ring(64, 1.0)};
    spec.master_seed = 737373;
    spec.n_trajectories = quick ? 50 : 200;
    for (int i = 0; i <= 8; ++i) spec.sample_times.push_back(2.2e-3 * i / 8.0);
    const auto records = ensemble_run(spec);
    const auto fit = fit_diffusion(decay_curve(records));
    add_check(report, "decay_rate_equals_d_theta",
              std::abs(fit.d_theta - 1000.0) / 1000.0, 0.05, true);
  }
}

void reduction_suite(SuiteReport& report, bool quick, int n_threads) {
  // Full-field, split, and phase-only simulators must share the stationary
  // relative-phase law when gamma_s >> gamma_inj. All three runs follow the
  // same protocol, so the test is of mutual agreement, insensitive to the
  // shared burn-in depth. Quick mode trades rate separation (1e2 vs 1e3)
  // for speed; the reduction error O(gamma_inj/gamma_s) stays far below the
  // KS resolution either way.
  const std::size_t n = quick ? 16 : 64;
  const double gamma_inj = 1.0;
  const double gamma_s = quick ? 100.0 : 1000.0;
  const double beta = 3.0;
  const double n_ss = 20.0;
  const double d_theta = gamma_inj / beta;

  NetworkParams net{design_opo_params(gamma_s, 2.0, n_ss), gamma_inj,
                    d_theta * n_ss, CouplingGraph::ring(n, 1.0)};
  KuramotoParams kur{gamma_inj, d_theta, CouplingGraph::ring(n, 1.0)};

  const double burn = 60.0;
  const std::size_t target = quick ? 3000 : 10000;
  const std::size_t snaps = target / (2 * n) + 1;
  std::vector<double> times;
  for (std::size_t i = 0; i < snaps; ++i) {
    times.push_back(burn + 2.0 * static_cast<double>(i));
  }

  auto collect = [&](SimModel model, std::uint64_t seed) {
    EnsembleSpec spec;
    spec.model = model;
    if (model == SimModel::kuramoto) {
      spec.kuramoto = kur;
    } else {
      spec.network = net;
      spec.dt = 0.05 / gamma_s;
    }
    spec.init = InitialPhases::aligned;
    spec.master_seed = seed;
    spec.n_trajectories = 2;
    spec.sample_times = times;
    const auto records = ensemble_run(spec, n_threads);
    std::vector<double> rel;
    for (std::size_t j = 0; j < times.size(); ++j) {
      const auto r = collect_relative_phases(records, j);
      rel.insert(rel.end(), r.begin(), r.end());
    }
    return rel;
  };

  const auto full = collect(SimModel::full_field, 901);
  const auto split = collect(SimModel::amplitude_phase, 902);
  const auto kuramoto = collect(SimModel::kuramoto, 903);

  const double crit = ks_critical_value(0.01, full.size(), split.size());
  add_check(report, "ks_full_vs_split",
            distribution_distance(full, split).ks_statistic, crit, true);
  add_check(report, "ks_split_vs_kuramoto",
            distribution_distance(split, kuramoto).ks_statistic, crit, true);
  add_check(report, "ks_full_vs_kuramoto",
            distribution_distance(full, kuramoto).ks_statistic, crit, true);
}

void boltzmann_suite(SuiteReport& report, bool quick, int n_threads) {
  const std::size_t n = 64;
  for (double beta : {1.0, 3.0, 10.0}) {
    const auto graph = CouplingGraph::ring(n, 1.0);
    const std::size_t target = quick ? 40000 : 500000;
    const double tv_bound = quick ? 0.03 : 0.01;

    EnsembleSpec spec;
    spec.model = SimModel::kuramoto;
    spec.kuramoto = KuramotoParams{1.0, 1.0 / beta, graph};
    spec.init = InitialPhases::aligned;
    spec.master_seed = 1000 + static_cast<std::uint64_t>(beta);
    spec.n_trajectories = 4;
    const std::size_t snaps =
        target / (n * static_cast<std::size_t>(spec.n_trajectories)) + 1;
    // Burn-in long enough that the cold long-wavelength modes contribute
    // less than ~1.5% bond-variance deficit: 1/(2 sqrt(pi gamma t)).
    for (std::size_t i = 0; i < snaps; ++i) {
      spec.sample_times.push_back(400.0 + 3.0 * static_cast<double>(i));
    }
    const auto records = ensemble_run(spec, n_threads);
    std::vector<double> langevin;
    for (std::size_t j = 0; j < spec.sample_times.size(); ++j) {
      const auto r = collect_relative_phases(records, j);
      langevin.insert(langevin.end(), r.begin(), r.end());
    }

    McmcConfig mc;
    mc.beta = beta;
    mc.proposal_width = std::min(kPi, 2.4 / std::sqrt(beta));
    mc.seed = 77000 + static_cast<std::uint64_t>(beta);
    mc.thin = 8;
    mc.n_sweeps = static_cast<int>((target / n + 1) * static_cast<std::size_t>(mc.thin));
    // Aligned start: zero-winding sector, matching the Langevin ensembles.
    const auto chain = sample_chain(mc, graph, PhaseConfig(n));
    std::vector<double> metropolis;
    for (const auto& c : chain) {
      const auto r = ring_relative_phases(c);
      metropolis.insert(metropolis.end(), r.begin(), r.end());
    }

    const auto d = distribution_distance(langevin, metropolis);
    add_check(report,
              "tv_langevin_vs_metropolis_beta_" + std::to_string(beta).substr(0, 4),
              d.tv_distance, tv_bound, true,
              std::to_string(langevin.size()) + " vs " +
                  std::to_string(metropolis.size()) + " samples");
  }
}

}  // namespace

std::vector<std::string> validation_suite_names() {
  return {"opo", "analytics", "estimation", "reduction", "boltzmann"};
}

SuiteReport run_validation_suite(const std::string& name, bool quick,
                                 int n_threads) {
  SuiteReport report;
  report.suite = name;
  report.quick = quick;
  if (name == "opo") {
    opo_suite(report, quick);
  } else if (name == "analytics") {
    analytics_suite(report, quick);
  } else if (name == "estimation") {
    estimation_suite(report, quick);
  } else if (name == "reduction") {
    reduction_suite(report, quick, n_threads);
  } else if (name == "boltzmann") {
    boltzmann_suite(report, quick, n_threads);
  } else {
    throw InvalidArgument("unknown validation suite '" + name +
                          "'; known suites: opo, analytics, estimation, "
                          "reduction, boltzmann");
  }
  report.passed = std::all_of(report.checks.begin(), report.checks.end(),
                              [](const CheckResult& c) { return c.passed; });
  return report;
}

std::string suite_report_json(const SuiteReport& report) {
  nlohmann::json j;
  j["schema"] = "noposim-validate-v1";
  j["suite"] = report.suite;
  j["quick"] = report.quick;
  j["passed"] = report.passed;
  auto checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["value"] = c.value;
    cj["threshold"] = c.threshold;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

}  // namespace nopo
