#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nopo/analytics.hpp"
#include "nopo/errors.hpp"
#include "nopo/xy.hpp"
#include "oracles.hpp"

using namespace nopo;

TEST_CASE("bessel_i at x = 0") {
  CHECK(bessel_i(0, 0.0) == 1.0);
  for (int n : {1, 2, 5, 17}) CHECK(bessel_i(n, 0.0) == 0.0);
}

TEST_CASE("bessel_i against the ascending series") {
  for (int n : {0, 1, 2, 3, 5, 10, 20, 40}) {
    for (double x : {1e-6, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 31.0, 50.0}) {
      const double ref = static_cast<double>(oracle::bessel_series(n, x));
      CHECK(bessel_i(n, x) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("bessel scaled variant against the series, large x") {
  for (int n : {0, 1, 5, 20}) {
    for (double x : {100.0, 300.0, 500.0}) {
      const double ref = oracle::bessel_series_scaled(n, x);
      CHECK(bessel_i_scaled(n, x) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
  // Public unscaled op stays finite through x = 500.
  CHECK(std::isfinite(bessel_i(0, 500.0)));
  CHECK_THROWS_AS(bessel_i(0, 800.0), NumericError);
}

TEST_CASE("bessel recurrence identity I_{n-1} - I_{n+1} = (2n/x) I_n") {
  for (auto [n, x] : {std::pair{1, 2.0}, std::pair{5, 10.0}}) {
    const double lhs = bessel_i(n - 1, x) - bessel_i(n + 1, x);
    const double rhs = 2.0 * n / x * bessel_i(n, x);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("negative order symmetry") {
  CHECK(bessel_i(-3, 2.5) == bessel_i(3, 2.5));
}

TEST_CASE("bessel_i rejects negative argument") {
  CHECK_THROWS_AS(bessel_i(0, -1.0), InvalidArgument);
}

TEST_CASE("frozen ratio I1/I0 at beta = 1") {
  CHECK(bessel_ratio(1.0) == doctest::Approx(0.446389965896534507).epsilon(1e-12));
}

TEST_CASE("partition function: free limit and quadrature oracle") {
  CHECK(log_partition_function({8, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));

  // N = 3: nested quadrature over the two free bond angles.
  for (double beta : {0.5, 1.0, 2.0}) {
    const auto q = oracle::ring_quadrature(3, beta, 512);
    const double log_z = log_partition_function({3, beta});
    CHECK(log_z == doctest::Approx(std::log(q.z_reduced)).epsilon(1e-8));
  }

  // N = 5000, beta = 31: finite in log space, dominated by the n = 0 term.
  const double log_z_big = log_partition_function({5000, 31.0});
  CHECK(std::isfinite(log_z_big));
  const double expected = 5000.0 * std::log(bessel_i_scaled(0, 31.0) * 1.0) +
                          5000.0 * 31.0;
  CHECK(log_z_big == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("partition function demands enough terms") {
  CHECK_THROWS_AS(log_partition_function({3, 8.0}, 2), NumericError);
}

TEST_CASE("relative phase pdf: uniform limit, symmetry, quadrature oracle") {
  for (double t : {-2.0, 0.0, 1.3}) {
    CHECK(relative_phase_pdf_exact(t, {16, 0.0}) ==
          doctest::Approx(1.0 / kTwoPi).epsilon(1e-14));
  }

  for (double t : {0.3, 1.1, 2.9}) {
    CHECK(relative_phase_pdf_exact(t, {5, 1.7}) ==
          doctest::Approx(relative_phase_pdf_exact(-t, {5, 1.7})).epsilon(1e-14));
  }

  const double beta = 1.0;
  const auto q = oracle::ring_quadrature(3, beta, 512);
  for (std::size_t i = 0; i < q.pdf_grid_angles.size(); i += 37) {
    const double t = q.pdf_grid_angles[i];
    CHECK(std::abs(relative_phase_pdf_exact(t, {3, beta}) - q.pdf_grid[i]) < 1e-6);
  }
}

TEST_CASE("exact pdf collapses onto the von Mises law at N = 5000") {
  for (double beta : {1.0, 10.0, 31.0}) {
    double sup = 0.0;
    for (double t = -kPi; t < kPi; t += 0.05) {
      sup = std::max(sup, std::abs(relative_phase_pdf_exact(t, {5000, beta}) -
                                   relative_phase_pdf_approx(t, beta)));
    }
    CHECK(sup < 1e-10);
  }
}

TEST_CASE("mean energy: zero limit, quadrature oracle, large-N collapse") {
  CHECK(mean_energy_exact({12, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));

  for (double beta : {0.5, 1.0, 2.0}) {
    const auto q = oracle::ring_quadrature(3, beta, 512);
    CHECK(mean_energy_exact({3, beta}) ==
          doctest::Approx(q.mean_energy).epsilon(1e-8));
  }

  const double per_spin_exact = mean_energy_exact({5000, 31.0}) / 5000.0;
  const double per_spin_approx = mean_energy_approx(5000, 31.0) / 5000.0;
  CHECK(std::abs(per_spin_exact - per_spin_approx) < 1e-10);
}

TEST_CASE("quadrature oracle at N = 4") {
  const double beta = 1.2;
  const auto q = oracle::ring_quadrature(4, beta, 160);
  CHECK(log_partition_function({4, beta}) ==
        doctest::Approx(std::log(q.z_reduced)).epsilon(1e-8));
  CHECK(mean_energy_exact({4, beta}) == doctest::Approx(q.mean_energy).epsilon(1e-8));
  for (std::size_t i = 0; i < q.pdf_grid_angles.size(); i += 13) {
    CHECK(std::abs(relative_phase_pdf_exact(q.pdf_grid_angles[i], {4, beta}) -
                   q.pdf_grid[i]) < 1e-6);
  }
}

TEST_CASE("approximate pdf values and normalization") {
  CHECK(relative_phase_pdf_approx(0.7, 0.0) ==
        doctest::Approx(1.0 / kTwoPi).epsilon(1e-15));
  CHECK(relative_phase_pdf_approx(0.0, 1.0) ==
        doctest::Approx(0.341710488623463159).epsilon(1e-12));

  for (double beta : {0.1, 1.0, 31.0}) {
    const int n = 4096;
    double integral = 0.0;
    for (int i = 0; i < n; ++i) {
      integral += relative_phase_pdf_approx(-kPi + (i + 0.5) * kTwoPi / n, beta);
    }
    integral *= kTwoPi / n;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("mean energy approx frozen values") {
  CHECK(mean_energy_approx(7, 0.0) == 0.0);
  CHECK(mean_energy_approx(5000, 31.0) ==
        doctest::Approx(-4918.68236006498937).epsilon(1e-12));
  CHECK(mean_energy_approx(5000, 1.0) ==
        doctest::Approx(-2231.94982948267254).epsilon(1e-12));
  // Asymptotic cross-check: A(beta) ~ 1 - 1/(2 beta) - 1/(8 beta^2).
  const double asym = 1.0 - 1.0 / 62.0 - 1.0 / (8.0 * 31.0 * 31.0);
  CHECK(mean_energy_approx(5000, 31.0) / -5000.0 ==
        doctest::Approx(asym).epsilon(1e-5));
}

TEST_CASE("exact-to-approximate gap shrinks with N") {
  for (double beta : {1.0, 5.0}) {
    double prev_gap = 1e9;
    for (std::size_t n : {3UL, 5UL, 9UL, 17UL, 33UL}) {
      const double gap = std::abs(mean_energy_exact({n, beta}) / static_cast<double>(n) -
                                  mean_energy_approx(n, beta) / static_cast<double>(n));
      CHECK(gap < prev_gap);
      prev_gap = gap;
    }
  }
}

TEST_CASE("exact pdf integrates to one") {
  for (double beta : {0.5, 2.0}) {
    for (std::size_t n : {3UL, 7UL}) {
      const int grid = 4096;
      double integral = 0.0;
      for (int i = 0; i < grid; ++i) {
        const double t = -kPi + (i + 0.5) * kTwoPi / grid;
        const double p = relative_phase_pdf_exact(t, {n, beta});
        CHECK(p >= 0.0);
        integral += p;
      }
      integral *= kTwoPi / grid;
      CHECK(integral == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("von Mises CDF against direct quadrature") {
  for (double beta : {0.0, 1.0, 31.0}) {
    double acc = 0.0;
    const int grid = 20000;
    const double h = kTwoPi / grid;
    int checked = 0;
    for (int i = 0; i < grid; ++i) {
      const double t = -kPi + (i + 0.5) * h;
      acc += relative_phase_pdf_approx(t, beta) * h;
      if (i % 1999 == 0) {
        CHECK(std::abs(von_mises_cdf(t + 0.5 * h, beta) - acc) < 1e-6);
        ++checked;
      }
    }
    CHECK(checked > 5);
  }
  CHECK(von_mises_cdf(-kPi, 2.0) == 0.0);
  CHECK(von_mises_cdf(kPi, 2.0) == 1.0);
}
