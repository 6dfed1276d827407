#pragma once

#include <complex>
#include <vector>

namespace nopo {

/// Physical rate constants of a single NOPO in field-normalised units
/// (|a|^2 = photon number).
struct OpoParams {
  double gamma_s = 0.0;        ///< signal cavity decay rate, Hz
  double gamma_i = 0.0;        ///< idler cavity decay rate, Hz
  double gamma_p = 0.0;        ///< pump cavity decay rate, Hz
  double kappa = 0.0;          ///< parametric coupling strength
  double pump_amplitude = 0.0; ///< |F_p|, external pump drive

  void validate() const;
  /// True when the pump and idler decay at least `factor` times faster than
  /// the signal, i.e. the adiabatic elimination is justified.
  bool adiabatic_regime(double factor = 100.0) const;
};

struct ThreeFieldState {
  std::complex<double> pump{0.0, 0.0};
  std::complex<double> signal{0.0, 0.0};
  std::complex<double> idler{0.0, 0.0};
};

/// Pump-depletion gain saturation s(x), x = photon number over n_0.
/// s(0) = 1 and s is strictly decreasing. Both cube-root arguments
/// -sqrt(x)/2 + sqrt(x/4 + 1/27) and +sqrt(x)/2 + sqrt(x/4 + 1/27) are
/// non-negative for x >= 0, so real cube roots apply throughout.
double gain_saturation(double x);

/// Oscillation threshold pump amplitude of the three-field system,
/// (gamma_p sqrt(gamma_s gamma_i) / 4 kappa)^{1/2}: the drive at which the
/// empty-cavity pump amplitude 2 F_p / sqrt(gamma_p) reaches the clamp value
/// (gamma_s gamma_i / kappa^2)^{1/4} where parametric gain balances signal
/// loss.
double threshold_pump(const OpoParams& params);

/// Saturation photon number n_0 = gamma_p^2 gamma_i / (8 kappa^2 |F_p|^2).
double saturation_photon_number(const OpoParams& params);

/// Pump ratio r = |F_p| / F_p^(th).
double pump_ratio(const OpoParams& params);

/// Steady-state signal photon number n_0 [(r-1)^{3/2} + (r-1)^{1/2}]^2 above
/// threshold, 0 at or below threshold.
double steady_state_photon_number(const OpoParams& params);

/// Explicit fixed-step integration of the three-field equations of motion
/// with a constant real pump drive. Returns the state after every step,
/// initial state included.
std::vector<ThreeFieldState> integrate_three_field(const ThreeFieldState& initial,
                                                   const OpoParams& params,
                                                   double dt, int n_steps);

/// Integration of the adiabatically reduced single-field signal equation.
/// The origin is an unstable fixed point above threshold, so a nonzero seed
/// field is required there.
std::vector<std::complex<double>> integrate_signal_scalar(std::complex<double> initial,
                                                          const OpoParams& params,
                                                          double dt, int n_steps);

/// Construct an above-threshold parameter set with a given pump ratio and
/// target steady-state photon number; pump and idler rates are placed
/// `rate_separation` above the signal rate. Used by experiment configs where
/// only the reduced dynamics matter, since no absolute kappa scale is
/// singled out by the physics.
OpoParams design_opo_params(double gamma_s, double pump_ratio,
                            double n_ss_target, double rate_separation = 1000.0);

}  // namespace nopo
