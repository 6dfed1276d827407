#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nopo/network.hpp"
#include "nopo/rng.hpp"
#include "nopo/xy.hpp"

namespace nopo {

/// Ensemble mean of cos(theta_rel(t) - theta_rel(0)) per sample time.
struct DecayCurve {
  std::vector<double> times;
  std::vector<double> mean_cosine;
  std::vector<std::int64_t> n_samples;
};

/// Builds the relative-phase cosine decay trace from an ensemble whose
/// trajectories all carry a snapshot at t = 0.
DecayCurve decay_curve(std::span<const TrajectoryRecord> records);

struct DiffusionFit {
  double d_theta = 0.0;
  double std_error = 0.0;
  int n_points_used = 0;
};

/// Least-squares fit of log(mean_cosine) against time through the origin.
/// Points with mean cosine below `floor` (default 0.1) are excluded as
/// noise-dominated; the t = 0 point carries no information and is skipped.
DiffusionFit fit_diffusion(const DecayCurve& curve, double floor = 0.1);

enum class BetaMethod { mle, histogram_fit };

struct BetaEstimate {
  double beta_eff = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  BetaMethod method = BetaMethod::mle;
  double mean_direction = 0.0;  ///< diagnostic only; the fit imposes zero mean
};

/// Effective inverse temperature from relative-phase samples.
/// mle: solves I_1(beta)/I_0(beta) = mean resultant length, standard error
/// from the von Mises Fisher information. histogram_fit: least squares of a
/// 36-bin density against the von Mises law, standard error from the fit
/// covariance.
BetaEstimate estimate_beta(std::span<const double> relative_phases,
                           BetaMethod method = BetaMethod::mle);

/// Unique beta >= 0 with I_1(beta)/I_0(beta) = r, for r in [0, 1).
double besselratio_inverse(double r);

struct EnergyEstimate {
  double mean = 0.0;
  double std_dev = 0.0;
  std::int64_t n_samples = 0;
};

/// Mean and sample standard deviation of the XY energy over the ensemble's
/// snapshots at the given time.
EnergyEstimate mean_energy_of_samples(std::span<const TrajectoryRecord> records,
                                      const CouplingGraph& graph, double at_time);

struct PhotonFluctuationStats {
  double delta = 0.0;             ///< std of sqrt(n_k / <n>)
  double effective_j_spread = 0.0;///< 2*delta, relative J_kl error
  double beta_correction = 0.0;   ///< gamma_inj <n> / D
  double mean_photon_number = 0.0;
};

/// Photon-number fluctuation diagnostics from field-model trajectories:
/// the spread delta with sqrt(n_k/<n>) = 1 +- delta, the induced relative
/// coupling error 2*delta, and the corrected temperature parameter
/// gamma_inj <n> / D.
PhotonFluctuationStats photon_fluctuation_diagnostics(
    std::span<const TrajectoryRecord> records, const NetworkParams& params);

/// Draws one sample from the zero-centred von Mises density with
/// concentration beta (Best-Fisher rejection sampling).
double sample_von_mises(double beta, PhiloxRng& rng);

}  // namespace nopo
