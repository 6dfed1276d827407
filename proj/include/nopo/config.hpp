#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nopo {

/// Fully resolved description of one batch experiment. Built from a flat
/// key = value config file plus command-line overrides; overrides win.
/// Rates accept Hz/kHz/MHz suffixes and times s/ms/us, normalised to Hz and
/// seconds at parse time.
struct ExperimentSpec {
  std::string model = "kuramoto";  ///< kuramoto | split | full | mcmc

  std::size_t ring_n = 256;
  double ring_j = 1.0;

  std::optional<double> gamma_inj;      ///< Hz
  std::optional<double> transmittance;  ///< alternative to gamma_inj
  double round_trip = 5e-6;             ///< seconds
  std::optional<double> d_theta;        ///< Hz, kuramoto model
  std::optional<double> noise_d;        ///< photons*Hz, field models

  double opo_gamma_s = 1e5;        ///< Hz, field models
  double opo_pump_ratio = 2.0;
  double opo_n_ss = 10.0;
  double opo_rate_separation = 1000.0;

  std::vector<double> beta_set;        ///< empty -> single point from rates
  std::string sweep_vary = "d_theta";  ///< d_theta | gamma_inj

  std::vector<double> t_a = {1e-3, 1e-2, 1e-1, 1.0};  ///< seconds, sorted

  int n_trajectories = 200;
  double dt = 0.0;  ///< 0 -> default step rule
  std::uint64_t seed = 0;
  int threads = 0;
  std::string init = "uniform";  ///< uniform | aligned
  bool paper_scale = false;

  std::string out_dir = "out";
  std::string samples_filename = "samples.csv";
  std::string summary_filename = "summary.json";

  int mcmc_sweeps = 20000;
  int mcmc_burn_in = -1;  ///< -1 -> default rule
  int mcmc_thin = 10;
  double mcmc_width = 1.0;
  bool mcmc_auto_tune = true;

  /// Throws InvalidArgument naming the offending field.
  void validate() const;

  /// Injection rate resolved from gamma_inj or transmittance.
  double resolved_gamma_inj() const;
};

/// Parses "13.6 kHz" / "440" / "2 MHz" into Hz.
double parse_rate(const std::string& text, const std::string& field);
/// Parses "1 ms" / "3e-7 s" / "5 us" into seconds.
double parse_time(const std::string& text, const std::string& field);

ExperimentSpec parse_config_file(const std::string& path);
ExperimentSpec parse_config_text(const std::string& text);

/// Applies one "key=value" override (same keys as the config file).
void apply_override(ExperimentSpec& spec, const std::string& assignment);

/// Documented config keys, for --help and the README.
std::string config_key_reference();

}  // namespace nopo
