#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nopo/errors.hpp"
#include "nopo/xy.hpp"
#include "oracles.hpp"

using namespace nopo;

TEST_CASE("wrap_phase canonical range") {
  CHECK(wrap_phase(0.0) == 0.0);
  CHECK(wrap_phase(3.0 * kPi) == doctest::Approx(-kPi).epsilon(1e-15));
  CHECK(wrap_phase(-kPi - 1e-9) == doctest::Approx(kPi - 1e-9).epsilon(1e-12));
  CHECK(wrap_phase(kPi) == -kPi);  // half-open interval
  for (double a : {-100.0, -6.5, -kPi, 0.3, 12.0, 1e8}) {
    const double w = wrap_phase(a);
    CHECK(w >= -kPi);
    CHECK(w < kPi);
    CHECK(std::remainder(w - a, kTwoPi) == doctest::Approx(0.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(wrap_phase(std::nan("")), InvalidArgument);
  CHECK_THROWS_AS(wrap_phase(INFINITY), InvalidArgument);
}

TEST_CASE("ring_graph structure") {
  const auto big = CouplingGraph::ring(5000, 1.0);
  CHECK(big.n_edges() == 5000);
  for (const Edge& e : big.edges()) CHECK(e.weight == 1.0);

  const auto tri = CouplingGraph::ring(3, 1.0);
  REQUIRE(tri.n_edges() == 3);
  CHECK(tri.edges()[0].k == 0);
  CHECK(tri.edges()[0].l == 1);
  CHECK(tri.edges()[1].k == 1);
  CHECK(tri.edges()[1].l == 2);
  CHECK(tri.edges()[2].k == 0);
  CHECK(tri.edges()[2].l == 2);

  const auto anti = CouplingGraph::ring(4, -1.0);
  CHECK(anti.n_edges() == 4);
  for (const Edge& e : anti.edges()) CHECK(e.weight == -1.0);

  CHECK_THROWS_AS(CouplingGraph::ring(2, 1.0), InvalidArgument);
}

TEST_CASE("coupling graph validation") {
  CHECK_THROWS_AS(CouplingGraph(4, {{0, 1, 1.0}, {0, 1, 2.0}}), InvalidArgument);
  CHECK_THROWS_AS(CouplingGraph(4, {{1, 0, 1.0}}), InvalidArgument);
  CHECK_THROWS_AS(CouplingGraph(4, {{0, 4, 1.0}}), InvalidArgument);
  const CouplingGraph g(5, {{0, 1, 2.0}, {1, 3, -1.0}});
  CHECK(g.max_degree() == 2);
  CHECK(g.sum_abs_weights() == 3.0);
  CHECK(g.neighbors(1).size() == 2);
  CHECK(g.neighbors(4).empty());
}

TEST_CASE("xy_energy reference values") {
  const auto ring = CouplingGraph::ring(10, 1.0);
  CHECK(xy_energy(PhaseConfig(10), ring).value == doctest::Approx(-10.0));

  PhaseConfig alternating(std::vector<double>{0.0, kPi, 0.0, kPi});
  const auto ring4 = CouplingGraph::ring(4, 1.0);
  CHECK(xy_energy(alternating, ring4).value == doctest::Approx(4.0));

  CHECK_THROWS_AS(xy_energy(PhaseConfig(5), ring), InvalidArgument);
}

TEST_CASE("xy_energy matches independent re-summation") {
  PhiloxRng rng(2024, 0);
  const auto ring8 = CouplingGraph::ring(8, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto config = PhaseConfig::uniform_random(8, rng);
    CHECK(xy_energy(config, ring8).value ==
          doctest::Approx(oracle::resummed_energy(config, ring8)).epsilon(1e-12));
  }
}

TEST_CASE("gradient reference values") {
  const auto ring = CouplingGraph::ring(6, 1.0);
  for (double g : xy_energy_gradient(PhaseConfig(6), ring)) {
    CHECK(g == doctest::Approx(0.0));
  }

  // Single-edge chain, theta = (0, pi/2): dH/dtheta = (-sin(pi/2), +sin(pi/2)).
  const CouplingGraph chain(2, {{0, 1, 1.0}});
  PhaseConfig pair(std::vector<double>{0.0, kPi / 2.0});
  const auto grad = xy_energy_gradient(pair, chain);
  CHECK(grad[0] == doctest::Approx(-1.0));
  CHECK(grad[1] == doctest::Approx(1.0));

  CHECK_THROWS_AS(xy_energy_gradient(PhaseConfig(3), chain), InvalidArgument);
}

TEST_CASE("gradient matches central finite differences") {
  PhiloxRng rng(99, 0);
  for (std::size_t n : {4UL, 16UL, 64UL}) {
    const auto ring = CouplingGraph::ring(n, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const auto config = PhaseConfig::uniform_random(n, rng);
      const auto analytic = xy_energy_gradient(config, ring);
      const auto fd = oracle::fd_gradient(config, ring);
      for (std::size_t k = 0; k < n; ++k) {
        CHECK(std::abs(analytic[k] - fd[k]) <
              1e-6 * (1.0 + std::abs(analytic[k])));
      }
    }
  }
}

TEST_CASE("invariants: global phase, gradient sum, energy bounds") {
  PhiloxRng rng(7, 0);
  const auto ring = CouplingGraph::ring(16, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto config = PhaseConfig::uniform_random(16, rng);
    const double e0 = xy_energy(config, ring).value;

    const double shift = rng.next_uniform(-10.0, 10.0);
    std::vector<double> shifted(16);
    for (std::size_t k = 0; k < 16; ++k) shifted[k] = config[k] + shift;
    const double e1 = xy_energy(PhaseConfig(shifted), ring).value;
    CHECK(std::abs(e1 - e0) < 1e-12 * 16);

    double grad_sum = 0.0;
    for (double g : xy_energy_gradient(config, ring)) grad_sum += g;
    CHECK(std::abs(grad_sum) < 1e-10);

    CHECK(std::abs(e0) <= ring.sum_abs_weights() + 1e-12);
  }
}

TEST_CASE("phase config stays wrapped under mutation") {
  PhaseConfig c(3);
  c.set(0, 5.0 * kPi + 0.25);
  c.set(1, -7.0);
  CHECK(c[0] >= -kPi);
  CHECK(c[0] < kPi);
  CHECK(c[1] >= -kPi);
  CHECK(c[1] < kPi);
  CHECK(c[0] == doctest::Approx(wrap_phase(5.0 * kPi + 0.25)));
}

TEST_CASE("ring relative phases close the loop") {
  PhiloxRng rng(11, 0);
  const auto config = PhaseConfig::uniform_random(12, rng);
  const auto rel = ring_relative_phases(config);
  REQUIRE(rel.size() == 12);
  double total = 0.0;
  for (double r : rel) total += r;
  // Sum of relative phases is a multiple of 2 pi (the winding number).
  CHECK(std::abs(std::remainder(total, kTwoPi)) < 1e-10);
}
