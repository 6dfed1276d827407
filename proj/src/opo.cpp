#include "nopo/opo.hpp"

#include <cmath>
#include <string>

#include "nopo/errors.hpp"

namespace nopo {

void OpoParams::validate() const {
  if (!(gamma_s > 0.0)) throw InvalidArgument("OpoParams: gamma_s must be > 0");
  if (!(gamma_i > 0.0)) throw InvalidArgument("OpoParams: gamma_i must be > 0");
  if (!(gamma_p > 0.0)) throw InvalidArgument("OpoParams: gamma_p must be > 0");
  if (!(kappa > 0.0)) throw InvalidArgument("OpoParams: kappa must be > 0");
  if (!(pump_amplitude >= 0.0)) {
    throw InvalidArgument("OpoParams: pump_amplitude must be >= 0");
  }
}

bool OpoParams::adiabatic_regime(double factor) const {
  return gamma_p >= factor * gamma_s && gamma_i >= factor * gamma_s;
}

double gain_saturation(double x) {
  if (!(x >= 0.0)) throw InvalidArgument("gain_saturation: requires x >= 0");
  const double root = std::sqrt(x / 4.0 + 1.0 / 27.0);
  const double half_sqrt_x = std::sqrt(x) / 2.0;
  // Both radicands are >= 0 since root >= sqrt(x)/2.
  const double u = std::cbrt(root + half_sqrt_x) - std::cbrt(root - half_sqrt_x);
  return 1.0 / (1.0 + u * u);
}

double threshold_pump(const OpoParams& params) {
  params.validate();
  return std::sqrt(params.gamma_p * std::sqrt(params.gamma_s * params.gamma_i) /
                   (4.0 * params.kappa));
}

double saturation_photon_number(const OpoParams& params) {
  params.validate();
  if (params.pump_amplitude <= 0.0) {
    throw InvalidArgument("saturation_photon_number: pump amplitude is zero");
  }
  const double kf = params.kappa * params.pump_amplitude;
  return params.gamma_p * params.gamma_p * params.gamma_i / (8.0 * kf * kf);
}

double pump_ratio(const OpoParams& params) {
  return params.pump_amplitude / threshold_pump(params);
}

double steady_state_photon_number(const OpoParams& params) {
  const double r = pump_ratio(params);
  if (r <= 1.0) return 0.0;
  const double g = std::sqrt(r - 1.0);
  const double bracket = g * g * g + g;
  return saturation_photon_number(params) * bracket * bracket;
}

namespace {

void check_three_field_stability(const OpoParams& params, double dt) {
  struct RateEntry {
    double rate;
    const char* name;
  };
  const double n_ss = steady_state_photon_number(params);
  const RateEntry rates[] = {
      {params.gamma_p, "gamma_p"},
      {params.gamma_i, "gamma_i"},
      {params.gamma_s, "gamma_s"},
      {params.kappa * n_ss, "parametric pump-depletion rate kappa*n_ss"},
  };
  for (const auto& [rate, name] : rates) {
    if (dt * rate >= 0.1) {
      throw InvalidArgument(std::string("integrate_three_field: dt*") + name +
                            " = " + std::to_string(dt * rate) +
                            " violates the stability bound 0.1");
    }
  }
}

}  // namespace

std::vector<ThreeFieldState> integrate_three_field(const ThreeFieldState& initial,
                                                   const OpoParams& params,
                                                   double dt, int n_steps) {
  params.validate();
  if (n_steps < 1) throw InvalidArgument("integrate_three_field: n_steps >= 1");
  if (!(dt > 0.0)) throw InvalidArgument("integrate_three_field: dt > 0");
  check_three_field_stability(params, dt);

  std::vector<ThreeFieldState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(n_steps) + 1);
  trajectory.push_back(initial);
  ThreeFieldState s = initial;
  const double drive = std::sqrt(params.gamma_p) * params.pump_amplitude;
  for (int step = 0; step < n_steps; ++step) {
    const auto ap = s.pump;
    const auto as = s.signal;
    const auto ai = s.idler;
    const auto dp = -0.5 * params.gamma_p * ap -
                    params.kappa * std::conj(ap) * as * ai + drive;
    const auto ds = -0.5 * params.gamma_s * as +
                    0.5 * params.kappa * std::conj(ai) * ap * ap;
    const auto di = -0.5 * params.gamma_i * ai +
                    0.5 * params.kappa * std::conj(as) * ap * ap;
    s.pump += dt * dp;
    s.signal += dt * ds;
    s.idler += dt * di;
    if (!std::isfinite(std::norm(s.pump)) || !std::isfinite(std::norm(s.signal)) ||
        !std::isfinite(std::norm(s.idler))) {
      throw NumericError("integrate_three_field: diverged at step " +
                         std::to_string(step));
    }
    trajectory.push_back(s);
  }
  return trajectory;
}

std::vector<std::complex<double>> integrate_signal_scalar(std::complex<double> initial,
                                                          const OpoParams& params,
                                                          double dt, int n_steps) {
  params.validate();
  if (n_steps < 1) throw InvalidArgument("integrate_signal_scalar: n_steps >= 1");
  if (!(dt > 0.0)) throw InvalidArgument("integrate_signal_scalar: dt > 0");
  const double r = pump_ratio(params);
  const double growth = 0.5 * params.gamma_s * std::max(1.0, r * r * r * r - 1.0);
  if (dt * growth >= 0.1) {
    throw InvalidArgument(
        "integrate_signal_scalar: dt*signal gain rate = " +
        std::to_string(dt * growth) + " violates the stability bound 0.1");
  }
  if (r > 1.0 && std::norm(initial) == 0.0) {
    throw InvalidArgument(
        "integrate_signal_scalar: zero initial field above threshold is an "
        "unstable fixed point; seed the signal");
  }
  const double n0 = saturation_photon_number(params);
  std::vector<std::complex<double>> trajectory;
  trajectory.reserve(static_cast<std::size_t>(n_steps) + 1);
  trajectory.push_back(initial);
  std::complex<double> a = initial;
  for (int step = 0; step < n_steps; ++step) {
    const double gain = gain_saturation(std::norm(a) / n0) * r;
    const double g4 = gain * gain * gain * gain;
    a += dt * 0.5 * params.gamma_s * (g4 - 1.0) * a;
    if (!std::isfinite(std::norm(a))) {
      throw NumericError("integrate_signal_scalar: diverged at step " +
                         std::to_string(step));
    }
    trajectory.push_back(a);
  }
  return trajectory;
}

OpoParams design_opo_params(double gamma_s, double pump_ratio, double n_ss_target,
                            double rate_separation) {
  if (!(gamma_s > 0.0)) throw InvalidArgument("design_opo_params: gamma_s > 0");
  if (!(pump_ratio > 1.0)) {
    throw InvalidArgument("design_opo_params: pump_ratio must exceed 1");
  }
  if (!(n_ss_target > 0.0)) {
    throw InvalidArgument("design_opo_params: n_ss_target > 0");
  }
  if (!(rate_separation >= 1.0)) {
    throw InvalidArgument("design_opo_params: rate_separation >= 1");
  }
  OpoParams p;
  p.gamma_s = gamma_s;
  p.gamma_p = gamma_s * rate_separation;
  p.gamma_i = gamma_s * rate_separation;
  const double g = std::sqrt(pump_ratio - 1.0);
  const double bracket = g * g * g + g;
  const double n0 = n_ss_target / (bracket * bracket);
  // n_0 expressed through r eliminates |F_p|:
  // n_0 = gamma_p gamma_i / (2 kappa r^2 sqrt(gamma_s gamma_i)).
  p.kappa = p.gamma_p * p.gamma_i /
            (2.0 * n0 * pump_ratio * pump_ratio * std::sqrt(gamma_s * p.gamma_i));
  p.pump_amplitude = pump_ratio * threshold_pump(p);
  return p;
}

}  // namespace nopo
