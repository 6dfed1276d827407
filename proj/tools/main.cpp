// noposim: command-line front end over the noposim C API.
//
// Subcommands: run (batch experiments from a config file plus overrides),
// validate / validate-opo (property suites), analytics (ring thermodynamics
// tables), mcmc (Metropolis reference sampler).

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "noposim.h"

namespace {

int status_to_exit_code(nopo_status status) {
  switch (status) {
    case NOPO_OK: return 0;
    case NOPO_ERROR_INVALID_ARGUMENT: return 1;
    case NOPO_ERROR_NUMERIC: return 2;
    case NOPO_ERROR_IO: return 3;
    case NOPO_ERROR_INTERNAL: return 2;
  }
  return 2;
}

int fail(nopo_status status) {
  std::cerr << "noposim: error (" << nopo_status_name(status)
            << "): " << nopo_last_error() << "\n";
  return status_to_exit_code(status);
}

struct RunOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::string seed;
  std::string threads;
  bool paper_scale = false;
  bool quiet = false;
};

int cmd_run(const RunOptions& opt) {
  std::vector<std::string> overrides = opt.overrides;
  if (!opt.out_dir.empty()) overrides.push_back("output.dir=" + opt.out_dir);
  if (!opt.seed.empty()) overrides.push_back("run.seed=" + opt.seed);
  if (!opt.threads.empty()) overrides.push_back("run.threads=" + opt.threads);
  if (opt.paper_scale) overrides.push_back("run.paper_scale=true");

  std::vector<const char*> pointers;
  pointers.reserve(overrides.size());
  for (const auto& s : overrides) pointers.push_back(s.c_str());

  char* summary = nullptr;
  const nopo_status status = nopo_experiment_run(
      opt.config_path.empty() ? nullptr : opt.config_path.c_str(),
      pointers.data(), pointers.size(), &summary);
  if (status != NOPO_OK) return fail(status);
  if (!opt.quiet) std::cout << summary;
  nopo_string_free(summary);
  return 0;
}

int cmd_validate(const std::string& suite, bool quick, int threads,
                 const std::string& json_path) {
  char* report = nullptr;
  int passed = 0;
  const nopo_status status =
      nopo_validate_suite(suite.c_str(), quick ? 1 : 0, threads, &passed, &report);
  if (status != NOPO_OK) return fail(status);
  std::cout << report;
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) {
      std::cerr << "noposim: cannot write '" << json_path << "'\n";
      nopo_string_free(report);
      return 3;
    }
    out << report;
  }
  nopo_string_free(report);
  std::cerr << "suite " << suite << (passed ? " PASSED" : " FAILED") << "\n";
  return passed ? 0 : 1;
}

int cmd_analytics(const std::vector<double>& betas,
                  const std::vector<std::size_t>& ns, int n_max,
                  const std::string& out_path) {
  char* csv = nullptr;
  const nopo_status status = nopo_analytics_table(
      betas.data(), betas.size(), ns.data(), ns.size(), n_max, &csv);
  if (status != NOPO_OK) return fail(status);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "noposim: cannot write '" << out_path << "'\n";
      nopo_string_free(csv);
      return 3;
    }
    out << csv;
  }
  nopo_string_free(csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NOPO-network Boltzmann sampler for the one-dimensional XY "
               "model: stochastic simulators, transfer-matrix analytics, and "
               "estimation tools"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nopo_version()));

  // run
  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Run a configured experiment");
  {
    char* keys = nullptr;
    if (nopo_config_key_reference(&keys) == NOPO_OK) {
      run->footer(std::string("Config keys (defaults shown):\n") + keys);
      nopo_string_free(keys);
    }
  }
  run->add_option("--config", run_opt.config_path,
                  "Experiment config file (key = value lines)")
      ->check(CLI::ExistingFile);
  run->add_option("--set", run_opt.overrides,
                  "Config override key=value; wins over the file");
  run->add_option("--out-dir", run_opt.out_dir, "Output directory");
  run->add_option("--seed", run_opt.seed, "Master seed");
  run->add_option("--threads", run_opt.threads,
                  "Worker threads (0 = NOPOSIM_THREADS env or hardware)");
  run->add_flag("--paper-scale", run_opt.paper_scale,
                "Full experimental protocol: N = 5000, 1000 trajectories");
  run->add_flag("--quiet", run_opt.quiet, "Suppress the summary on stdout");

  // validate
  std::string suite;
  bool quick = false;
  int threads = 0;
  std::string report_path;
  auto* validate = app.add_subcommand(
      "validate", "Run a property suite: opo, analytics, estimation, "
                  "reduction, boltzmann");
  validate->add_option("suite", suite, "Suite name")->required();
  validate->add_flag("--quick", quick, "Reduced sample sizes (smoke test)");
  validate->add_option("--threads", threads, "Worker threads");
  validate->add_option("--json", report_path, "Also write the report here");

  // validate-opo
  bool opo_quick = false;
  std::string opo_report_path;
  auto* validate_opo =
      app.add_subcommand("validate-opo", "Single-oscillator physics checks");
  validate_opo->add_flag("--quick", opo_quick, "Reduced horizons");
  validate_opo->add_option("--json", opo_report_path,
                           "Also write the report here");

  // analytics
  std::vector<double> betas;
  std::vector<std::size_t> ns;
  int n_max = 40;
  std::string table_path;
  auto* analytics = app.add_subcommand(
      "analytics", "Ring thermodynamics table (transfer-matrix values)");
  analytics->add_option("--beta", betas, "Inverse temperatures")
      ->required()
      ->delimiter(',');
  analytics->add_option("--n", ns, "Ring sizes")->required()->delimiter(',');
  analytics->add_option("--n-max", n_max, "Bessel truncation order");
  analytics->add_option("-o,--output", table_path, "CSV file (default stdout)");

  // mcmc
  double mc_beta = 1.0;
  std::size_t mc_n = 256;
  double mc_j = 1.0;
  int mc_sweeps = 20000;
  int mc_burn_in = -1;
  int mc_thin = 10;
  double mc_width = 1.0;
  std::string mc_seed = "0";
  std::string mc_out_dir = "out";
  auto* mcmc = app.add_subcommand(
      "mcmc", "Metropolis reference sampler for the XY ring");
  mcmc->add_option("--beta", mc_beta, "Inverse temperature")->required();
  mcmc->add_option("--n", mc_n, "Ring size");
  mcmc->add_option("--j", mc_j, "Coupling");
  mcmc->add_option("--sweeps", mc_sweeps, "Post burn-in sweeps");
  mcmc->add_option("--burn-in", mc_burn_in, "Burn-in sweeps (-1 = default)");
  mcmc->add_option("--thin", mc_thin, "Keep every thin-th configuration");
  mcmc->add_option("--width", mc_width, "Proposal window, radians");
  mcmc->add_option("--seed", mc_seed, "Chain seed");
  mcmc->add_option("--out-dir", mc_out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(run_opt);
  if (validate->parsed()) return cmd_validate(suite, quick, threads, report_path);
  if (validate_opo->parsed()) {
    return cmd_validate("opo", opo_quick, 0, opo_report_path);
  }
  if (analytics->parsed()) return cmd_analytics(betas, ns, n_max, table_path);
  if (mcmc->parsed()) {
    RunOptions opt;
    opt.overrides = {"model=mcmc",
                     "ring.n=" + std::to_string(mc_n),
                     "ring.j=" + std::to_string(mc_j),
                     "sweep.beta_set=" + std::to_string(mc_beta),
                     "mcmc.sweeps=" + std::to_string(mc_sweeps),
                     "mcmc.burn_in=" + std::to_string(mc_burn_in),
                     "mcmc.thin=" + std::to_string(mc_thin),
                     "mcmc.width=" + std::to_string(mc_width),
                     "run.seed=" + mc_seed,
                     "output.dir=" + mc_out_dir};
    return cmd_run(opt);
  }
  return 0;
}
