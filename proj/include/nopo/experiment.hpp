#pragma once

#include <span>
#include <string>
#include <vector>

#include "nopo/config.hpp"

namespace nopo {

struct ExperimentResult {
  std::vector<std::string> samples_paths;  ///< one per sweep point
  std::string summary_path;
  std::string summary_json;
};

/// Runs the configured experiment: simulates the beta_set sweep (or the
/// single operating point), writes one samples CSV per sweep point plus a
/// summary JSON with beta_eff, mean energy, and the analytic reference
/// curves per (beta_set, t_a). Identical spec and seed give byte-identical
/// CSV output, independent of the thread count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// CSV table of ring thermodynamics: N, beta, log_Z, exact and approximate
/// mean energies, and the sup-norm gap between the exact and von Mises
/// relative-phase densities.
std::string analytics_table_csv(std::span<const double> betas,
                                std::span<const std::size_t> n_values,
                                int n_max = 40);

}  // namespace nopo
