#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nopo/rng.hpp"
#include "nopo/xy.hpp"

namespace nopo {

/// Single-site Metropolis sampler configuration for the XY Gibbs measure.
struct McmcConfig {
  double beta = 1.0;
  double proposal_width = 1.0;  ///< radians, in (0, pi]
  int n_sweeps = 1000;          ///< post-burn-in sweeps
  int burn_in = -1;             ///< -1 selects the default rule
  int thin = 1;
  std::uint64_t seed = 0;
  bool auto_tune = false;  ///< tune width towards ~40% acceptance during
                           ///< burn-in only; tuning later would break
                           ///< detailed balance

  void validate() const;
};

/// Default burn-in: 10 N sweeps for beta <= 10, 100 N above (the 1D XY chain
/// relaxes slowly at low temperature).
int default_burn_in(double beta, std::size_t n_spins);

enum class UpdateOrder { sequential, random };

/// One sweep of N single-site Metropolis updates with uniform window
/// proposals; returns the acceptance fraction.
double metropolis_sweep(PhaseConfig& config, const CouplingGraph& graph,
                        double beta, double proposal_width, PhiloxRng& rng,
                        UpdateOrder order = UpdateOrder::sequential);

/// Runs burn-in then n_sweeps sweeps, keeping every thin-th configuration.
std::vector<PhaseConfig> sample_chain(const McmcConfig& config,
                                      const CouplingGraph& graph);
std::vector<PhaseConfig> sample_chain(const McmcConfig& config,
                                      const CouplingGraph& graph,
                                      PhaseConfig initial);

struct DistanceResult {
  double tv_distance = 0.0;
  double ks_statistic = 0.0;
};

/// Total-variation distance on 36 equal bins over [-pi, pi) plus the
/// two-sample Kolmogorov-Smirnov statistic. Each sample set needs >= 1000
/// points.
DistanceResult distribution_distance(std::span<const double> samples_a,
                                     std::span<const double> samples_b);

/// One-sample variant against the zero-centred von Mises law at the given
/// concentration.
DistanceResult distribution_distance_to_von_mises(std::span<const double> samples,
                                                  double beta);

/// Two-sample KS critical value at significance alpha (0.01 or 0.05).
double ks_critical_value(double alpha, std::size_t n, std::size_t m);

}  // namespace nopo
