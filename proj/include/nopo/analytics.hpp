#pragma once

#include <cstddef>
#include <vector>

namespace nopo {

/// Modified Bessel function of the first kind, I_n(x), for integer order.
/// Negative orders use I_{-n} = I_n. Requires x >= 0. Throws NumericError
/// when the unscaled value would overflow a double (x above ~709); use
/// bessel_i_scaled there instead.
double bessel_i(int order, double x);

/// Exponentially scaled variant e^{-x} I_n(x); stable for any x >= 0.
double bessel_i_scaled(int order, double x);

/// All scaled orders 0..n_max at once (one downward recurrence pass).
std::vector<double> bessel_i_scaled_array(int n_max, double x);

/// Ratio I_1(beta) / I_0(beta), the mean resultant length of a von Mises
/// distribution with concentration beta.
double bessel_ratio(double beta);

/// One-dimensional XY ring at unit coupling and inverse temperature beta.
struct RingSpec {
  std::size_t n_spins = 3;
  double beta = 1.0;
};

inline constexpr int kDefaultBesselTerms = 40;

/// log Z with Z = sum_n I_n(beta)^N, evaluated with scaled Bessel terms so
/// that N in the thousands and beta in the hundreds stay in range. Throws
/// NumericError if the truncation tail at n_max is not negligible.
double log_partition_function(const RingSpec& spec,
                              int n_max = kDefaultBesselTerms);

/// Exact marginal density of the relative phase between adjacent spins.
double relative_phase_pdf_exact(double theta_rel, const RingSpec& spec,
                                int n_max = kDefaultBesselTerms);

/// Exact ensemble mean of the ring energy.
double mean_energy_exact(const RingSpec& spec, int n_max = kDefaultBesselTerms);

/// Large-N limit of the relative-phase density: the von Mises law
/// exp(beta cos)/2pi I_0(beta).
double relative_phase_pdf_approx(double theta_rel, double beta);

/// Large-N limit of the mean energy: -N I_1(beta)/I_0(beta).
double mean_energy_approx(std::size_t n_spins, double beta);

/// CDF of the zero-centred von Mises density on [-pi, pi).
double von_mises_cdf(double theta, double beta);

}  // namespace nopo
