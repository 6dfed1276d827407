// Exercises the public C surface of libnoposim the way an external FFI
// client would: handles, error codes, buffers. Links the shared library
// only and includes nothing from the C++ core.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "noposim.h"

TEST_CASE("version and status strings") {
  CHECK(std::string(nopo_version()) == "1.0.0");
  CHECK(std::string(nopo_status_name(NOPO_OK)) == "ok");
  CHECK(std::string(nopo_status_name(NOPO_ERROR_NUMERIC)) == "numeric failure");
}

TEST_CASE("graph lifecycle and energy") {
  nopo_graph* ring = nullptr;
  REQUIRE(nopo_graph_ring(8, 1.0, &ring) == NOPO_OK);
  CHECK(nopo_graph_n_spins(ring) == 8);
  CHECK(nopo_graph_n_edges(ring) == 8);

  std::vector<double> aligned(8, 0.25);
  double energy = 0.0;
  REQUIRE(nopo_xy_energy(ring, aligned.data(), aligned.size(), &energy) ==
          NOPO_OK);
  CHECK(energy == doctest::Approx(-8.0));

  std::vector<double> grad(8, 99.0);
  REQUIRE(nopo_xy_energy_gradient(ring, aligned.data(), aligned.size(),
                                  grad.data()) == NOPO_OK);
  for (double g : grad) CHECK(g == doctest::Approx(0.0));
  nopo_graph_destroy(ring);
}

TEST_CASE("errors carry a message and the right code") {
  nopo_graph* graph = nullptr;
  CHECK(nopo_graph_ring(2, 1.0, &graph) == NOPO_ERROR_INVALID_ARGUMENT);
  CHECK(std::strlen(nopo_last_error()) > 0);

  const uint32_t k[] = {0, 0};
  const uint32_t l[] = {1, 1};
  const double w[] = {1.0, 2.0};
  CHECK(nopo_graph_create(4, k, l, w, 2, &graph) ==
        NOPO_ERROR_INVALID_ARGUMENT);
  CHECK(std::string(nopo_last_error()).find("duplicate") != std::string::npos);

  double out = 0.0;
  CHECK(nopo_bessel_i(0, -1.0, &out) == NOPO_ERROR_INVALID_ARGUMENT);
  CHECK(nopo_bessel_i(0, 800.0, &out) == NOPO_ERROR_NUMERIC);
  CHECK(nopo_wrap_phase(NAN, &out) == NOPO_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("opo formulas through the C surface") {
  nopo_opo_params params{};
  REQUIRE(nopo_design_opo_params(1e-3, 2.0, 10.0, 1000.0, &params) == NOPO_OK);
  double threshold = 0.0, n_ss = 0.0, s = 0.0, n0 = 0.0;
  REQUIRE(nopo_threshold_pump(&params, &threshold) == NOPO_OK);
  CHECK(params.pump_amplitude == doctest::Approx(2.0 * threshold));
  REQUIRE(nopo_steady_state_photon_number(&params, &n_ss) == NOPO_OK);
  CHECK(n_ss == doctest::Approx(10.0));
  REQUIRE(nopo_saturation_photon_number(&params, &n0) == NOPO_OK);
  REQUIRE(nopo_gain_saturation(n_ss / n0, &s) == NOPO_OK);
  CHECK(s * 2.0 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("analytics functions through the C surface") {
  double v = 0.0;
  REQUIRE(nopo_bessel_i(1, 1.0, &v) == NOPO_OK);
  double i0 = 0.0;
  REQUIRE(nopo_bessel_i(0, 1.0, &i0) == NOPO_OK);
  CHECK(v / i0 == doctest::Approx(0.446389965896534507).epsilon(1e-12));

  REQUIRE(nopo_mean_energy_approx(5000, 31.0, &v) == NOPO_OK);
  CHECK(v == doctest::Approx(-4918.68236006498937).epsilon(1e-12));

  REQUIRE(nopo_log_partition_function(3, 0.0, 40, &v) == NOPO_OK);
  CHECK(v == doctest::Approx(0.0));

  REQUIRE(nopo_relative_phase_pdf_approx(0.0, 1.0, &v) == NOPO_OK);
  CHECK(v == doctest::Approx(0.341710488623463).epsilon(1e-12));

  REQUIRE(nopo_von_mises_cdf(0.0, 2.0, &v) == NOPO_OK);
  CHECK(v == doctest::Approx(0.5).epsilon(1e-12));

  REQUIRE(nopo_besselratio_inverse(0.446389965896534507, &v) == NOPO_OK);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ensemble round trip with estimation") {
  nopo_graph* ring = nullptr;
  REQUIRE(nopo_graph_ring(32, 1.0, &ring) == NOPO_OK);

  const double times[] = {100.0, 110.0, 120.0, 130.0};
  nopo_ensemble_spec spec{};
  spec.model = NOPO_MODEL_KURAMOTO;
  spec.graph = ring;
  spec.gamma_inj = 1.0;
  spec.d_theta = 0.25;  // beta_set = 4
  spec.init = NOPO_INIT_ALIGNED;
  spec.sample_times = times;
  spec.n_sample_times = 4;
  spec.n_trajectories = 30;
  spec.master_seed = 77;

  nopo_ensemble* ens = nullptr;
  REQUIRE(nopo_ensemble_run(&spec, &ens) == NOPO_OK);
  CHECK(nopo_ensemble_n_trajectories(ens) == 30);
  CHECK(nopo_ensemble_n_times(ens) == 4);
  CHECK(nopo_ensemble_n_spins(ens) == 32);
  CHECK(nopo_ensemble_has_photon_numbers(ens) == 0);

  double times_out[4];
  REQUIRE(nopo_ensemble_times(ens, times_out) == NOPO_OK);
  CHECK(times_out[2] == doctest::Approx(120.0));

  std::vector<double> rel(30 * 32);
  size_t n_rel = 0;
  REQUIRE(nopo_ensemble_relative_phases(ens, 3, rel.data(), rel.size(),
                                        &n_rel) == NOPO_OK);
  CHECK(n_rel == 30 * 32);

  double beta = 0.0, se = 0.0;
  REQUIRE(nopo_estimate_beta(rel.data(), n_rel, NOPO_BETA_MLE, &beta, &se) ==
          NOPO_OK);
  CHECK(std::abs(beta - 4.0) < 4.0 * se + 0.4);

  double mean = 0.0, sd = 0.0;
  size_t n_energy = 0;
  REQUIRE(nopo_ensemble_mean_energy(ens, ring, 3, &mean, &sd, &n_energy) ==
          NOPO_OK);
  CHECK(n_energy == 30);
  double theory = 0.0;
  REQUIRE(nopo_mean_energy_approx(32, 4.0, &theory) == NOPO_OK);
  CHECK(std::abs(mean - theory) < 3.0 * sd / std::sqrt(30.0) + 1.0);

  // Buffer too small is an invalid-argument error, not a crash.
  double too_small[4];
  CHECK(nopo_ensemble_relative_phases(ens, 0, too_small, 4, &n_rel) ==
        NOPO_ERROR_INVALID_ARGUMENT);

  nopo_ensemble_destroy(ens);
  nopo_graph_destroy(ring);
}

TEST_CASE("phase-only ensembles refuse photon queries") {
  nopo_graph* ring = nullptr;
  REQUIRE(nopo_graph_ring(8, 1.0, &ring) == NOPO_OK);
  const double times[] = {1.0};
  nopo_ensemble_spec spec{};
  spec.model = NOPO_MODEL_KURAMOTO;
  spec.graph = ring;
  spec.gamma_inj = 0.0;
  spec.d_theta = 1.0;
  spec.sample_times = times;
  spec.n_sample_times = 1;
  spec.n_trajectories = 1;
  nopo_ensemble* ens = nullptr;
  REQUIRE(nopo_ensemble_run(&spec, &ens) == NOPO_OK);
  double buf[8];
  CHECK(nopo_ensemble_photon_numbers(ens, 0, 0, buf) ==
        NOPO_ERROR_INVALID_ARGUMENT);
  nopo_ensemble_destroy(ens);
  nopo_graph_destroy(ring);
}

TEST_CASE("split-model ensemble reports photon numbers") {
  nopo_graph* ring = nullptr;
  REQUIRE(nopo_graph_ring(8, 1.0, &ring) == NOPO_OK);
  nopo_ensemble_spec spec{};
  REQUIRE(nopo_design_opo_params(1000.0, 2.0, 12.0, 1000.0, &spec.opo) ==
          NOPO_OK);
  const double times[] = {0.05};
  spec.model = NOPO_MODEL_SPLIT;
  spec.graph = ring;
  spec.gamma_inj = 1.0;
  spec.diffusion_d = 1.2;
  spec.sample_times = times;
  spec.n_sample_times = 1;
  spec.n_trajectories = 2;
  spec.master_seed = 3;
  nopo_ensemble* ens = nullptr;
  REQUIRE(nopo_ensemble_run(&spec, &ens) == NOPO_OK);
  CHECK(nopo_ensemble_has_photon_numbers(ens) == 1);
  double photons[8];
  REQUIRE(nopo_ensemble_photon_numbers(ens, 1, 0, photons) == NOPO_OK);
  for (double n : photons) {
    CHECK(n > 6.0);
    CHECK(n < 20.0);
  }
  nopo_ensemble_destroy(ens);
  nopo_graph_destroy(ring);
}

TEST_CASE("mcmc chain through the C surface") {
  nopo_graph* ring = nullptr;
  REQUIRE(nopo_graph_ring(16, 1.0, &ring) == NOPO_OK);
  nopo_mcmc_config config{};
  config.beta = 2.0;
  config.proposal_width = 1.5;
  config.n_sweeps = 3000;
  config.burn_in = -1;
  config.thin = 3;
  config.seed = 10;
  nopo_chain* chain = nullptr;
  REQUIRE(nopo_mcmc_sample_chain(&config, ring, &chain) == NOPO_OK);
  CHECK(nopo_chain_n_configs(chain) == 1000);

  double theta[16];
  REQUIRE(nopo_chain_config(chain, 999, theta) == NOPO_OK);
  for (double t : theta) {
    CHECK(t >= -3.15);
    CHECK(t < 3.15);
  }

  std::vector<double> rel(1000 * 16);
  size_t n_rel = 0;
  REQUIRE(nopo_chain_relative_phases(chain, rel.data(), rel.size(), &n_rel) ==
          NOPO_OK);
  CHECK(n_rel == rel.size());

  double tv = 0.0, ks = 0.0;
  REQUIRE(nopo_distribution_distance_von_mises(rel.data(), n_rel, 2.0, &tv,
                                               &ks) == NOPO_OK);
  CHECK(tv < 0.05);
  nopo_chain_destroy(chain);
  nopo_graph_destroy(ring);
}

TEST_CASE("fit_diffusion through the C surface") {
  std::vector<double> times, cosines;
  for (int i = 0; i <= 10; ++i) {
    times.push_back(i * 1e-4);
    cosines.push_back(std::exp(-2000.0 * times.back()));
  }
  double d = 0.0, se = 0.0;
  REQUIRE(nopo_fit_diffusion(times.data(), cosines.data(), times.size(), &d,
                             &se) == NOPO_OK);
  CHECK(d == doctest::Approx(2000.0).epsilon(1e-9));

  double gamma = 0.0;
  REQUIRE(nopo_gamma_inj_from_transmittance(0.25, 5e-6, &gamma) == NOPO_OK);
  CHECK(gamma == doctest::Approx(200000.0));
}

TEST_CASE("validation suite through the C surface") {
  int passed = -1;
  char* report = nullptr;
  REQUIRE(nopo_validate_suite("opo", 1, 0, &passed, &report) == NOPO_OK);
  CHECK(passed == 1);
  REQUIRE(report != nullptr);
  CHECK(std::string(report).find("fixed_point_identity") != std::string::npos);
  nopo_string_free(report);

  CHECK(nopo_validate_suite("bogus", 0, 0, &passed, &report) ==
        NOPO_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("analytics table and config reference strings") {
  const double betas[] = {1.0};
  const size_t ns[] = {3};
  char* csv = nullptr;
  REQUIRE(nopo_analytics_table(betas, 1, ns, 1, 40, &csv) == NOPO_OK);
  CHECK(std::string(csv).rfind("N,beta,", 0) == 0);
  nopo_string_free(csv);

  char* keys = nullptr;
  REQUIRE(nopo_config_key_reference(&keys) == NOPO_OK);
  CHECK(std::string(keys).find("rates.gamma_inj") != std::string::npos);
  nopo_string_free(keys);
}

TEST_CASE("experiment through the C surface") {
  const char* overrides[] = {
      "model=kuramoto",       "ring.n=8",
      "rates.gamma_inj=2 Hz", "rates.d_theta=1 Hz",
      "times.t_a=0.5 s",      "run.n_trajectories=3",
      "run.seed=5",           "output.dir=/tmp/noposim_capi_run"};
  char* summary = nullptr;
  REQUIRE(nopo_experiment_run(nullptr, overrides, 8, &summary) == NOPO_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("\"beta_eff\"") != std::string::npos);
  nopo_string_free(summary);

  const char* bad[] = {"model=warp"};
  CHECK(nopo_experiment_run(nullptr, bad, 1, &summary) ==
        NOPO_ERROR_INVALID_ARGUMENT);
  CHECK(std::string(nopo_last_error()).find("model") != std::string::npos);
}
