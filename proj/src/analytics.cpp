#include "nopo/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nopo/errors.hpp"
#include "nopo/xy.hpp"

namespace nopo {

namespace {

// Miller's algorithm: downward recurrence I_{k-1} = I_{k+1} + (2k/x) I_k
// started at a throwaway order, normalised with the exact sum rule
// e^{-x} (I_0 + 2 sum_{k>=1} I_k) = 1. The recurrence is stable downward
// and the normalisation yields the scaled values directly, so nothing here
// can overflow for any x: intermediate magnitudes are kept in range by
// periodic rescaling.
std::vector<double> miller_scaled(int n_max, double x) {
  // Start order: large enough that I_M/I_0 < 1e-19 for every x. For M >> x
  // the ratio decays factorially; near M ~ x it decays like exp(-M^2/2x),
  // hence the sqrt(90 x) floor.
  const int start = std::max({n_max + 20,
                              static_cast<int>(std::ceil(std::sqrt(90.0 * std::max(x, 1.0)))) + 20,
                              40});
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  double ip1 = 0.0;  // I_{k+1} (unnormalised)
  double ik = 1e-280; // I_k seed
  double sum = 0.0;   // accumulates I_0 + 2 sum I_k, same scale
  for (int k = start; k >= 1; --k) {
    const double im1 = ip1 + (2.0 * k / x) * ik;
    if (k - 1 <= n_max) out[static_cast<std::size_t>(k - 1)] = im1;
    if (k <= n_max) out[static_cast<std::size_t>(k)] = ik;
    sum += 2.0 * ik;
    ip1 = ik;
    ik = im1;
    if (std::abs(ik) > 1e260) {  // rescale everything; ratios are what matter
      ik *= 1e-260;
      ip1 *= 1e-260;
      sum *= 1e-260;
      for (double& v : out) v *= 1e-260;
    }
  }
  sum += ik;  // I_0 term
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace

std::vector<double> bessel_i_scaled_array(int n_max, double x) {
  if (n_max < 0) throw InvalidArgument("bessel_i_scaled_array: n_max < 0");
  if (!(x >= 0.0)) throw InvalidArgument("bessel_i: requires x >= 0");
  if (x == 0.0) {
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
    out[0] = 1.0;  // I_n(0) = delta_{n0}
    return out;
  }
  return miller_scaled(n_max, x);
}

double bessel_i_scaled(int order, double x) {
  const int n = std::abs(order);
  return bessel_i_scaled_array(n, x)[static_cast<std::size_t>(n)];
}

double bessel_i(int order, double x) {
  const double scaled = bessel_i_scaled(order, x);
  const double value = scaled * std::exp(x);
  if (!std::isfinite(value)) {
    throw NumericError("bessel_i: overflow at x = " + std::to_string(x) +
                       "; use bessel_i_scaled");
  }
  return value;
}

double bessel_ratio(double beta) {
  if (!(beta >= 0.0)) throw InvalidArgument("bessel_ratio: requires beta >= 0");
  if (beta == 0.0) return 0.0;
  const auto i = bessel_i_scaled_array(1, beta);
  return i[1] / i[0];
}

namespace {

struct ScaledRatios {
  std::vector<double> rho;  // rho_n = I_n(beta)/I_0(beta), n = 0..n_max
  double i0_scaled = 1.0;   // e^{-beta} I_0(beta)
};

ScaledRatios ratios_for(const RingSpec& spec, int n_max) {
  if (spec.n_spins < 3) {
    throw InvalidArgument("RingSpec: n_spins must be >= 3");
  }
  if (!(spec.beta >= 0.0)) {
    throw InvalidArgument("RingSpec: beta must be >= 0");
  }
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  auto scaled = bessel_i_scaled_array(n_max, spec.beta);
  ScaledRatios r;
  r.i0_scaled = scaled[0];
  r.rho.resize(scaled.size());
  for (std::size_t n = 0; n < scaled.size(); ++n) r.rho[n] = scaled[n] / scaled[0];
  return r;
}

// S_N = 1 + 2 sum_{n>=1} rho_n^N, with an a-posteriori truncation bound:
// the terms decay faster than geometrically, so the tail is below the last
// term times q/(1-q) with q the last observed ratio.
double tail_checked_sum(const std::vector<double>& rho, double power,
                        const char* op) {
  double sum = 1.0;
  double last = 1.0;
  double prev = 1.0;
  for (std::size_t n = 1; n < rho.size(); ++n) {
    prev = last;
    last = std::pow(rho[n], power);
    sum += 2.0 * last;
    if (last == 0.0) return sum;  // underflow: tail is exactly negligible
  }
  const double q = prev > 0.0 ? std::min(last / prev, 0.99) : 0.0;
  const double tail_bound = 2.0 * last * q / (1.0 - q);
  if (tail_bound > 1e-14 * sum) {
    throw NumericError(std::string(op) +
                       ": Bessel sum not converged at n_max = " +
                       std::to_string(rho.size() - 1) + "; increase n_max");
  }
  return sum;
}

}  // namespace

double log_partition_function(const RingSpec& spec, int n_max) {
  const auto r = ratios_for(spec, n_max);
  const double big_n = static_cast<double>(spec.n_spins);
  const double s_n = tail_checked_sum(r.rho, big_n, "log_partition_function");
  // log Z = N log I_0 + log S_N, with log I_0 = beta + log(scaled I_0).
  return big_n * (spec.beta + std::log(r.i0_scaled)) + std::log(s_n);
}

double relative_phase_pdf_exact(double theta_rel, const RingSpec& spec,
                                int n_max) {
  const auto r = ratios_for(spec, n_max);
  const double big_n = static_cast<double>(spec.n_spins);
  const double s_n = tail_checked_sum(r.rho, big_n, "relative_phase_pdf_exact");
  double series = 1.0;
  for (std::size_t n = 1; n < r.rho.size(); ++n) {
    const double term = std::pow(r.rho[n], big_n - 1.0);
    if (term == 0.0) break;
    series += 2.0 * term * std::cos(static_cast<double>(n) * theta_rel);
  }
  // exp(beta cos t)/(2 pi Z) * sum_n cos(n t) I_n^{N-1}, in scaled form.
  return std::exp(spec.beta * (std::cos(theta_rel) - 1.0)) * series /
         (kTwoPi * r.i0_scaled * s_n);
}

double mean_energy_exact(const RingSpec& spec, int n_max) {
  const auto r = ratios_for(spec, n_max);
  const double big_n = static_cast<double>(spec.n_spins);
  const double s_n = tail_checked_sum(r.rho, big_n, "mean_energy_exact");
  // -(N/Z) sum_n I_n^{N-1} I_{n+1}; the sum over all integers n folds onto
  // n >= 0 as rho_0^{N-1} rho_1 + sum_{n>=1} rho_n^{N-1}(rho_{n+1} + rho_{n-1}).
  double acc = r.rho[1];
  for (std::size_t n = 1; n + 1 < r.rho.size(); ++n) {
    const double p = std::pow(r.rho[n], big_n - 1.0);
    if (p == 0.0) break;
    acc += p * (r.rho[n + 1] + r.rho[n - 1]);
  }
  return -big_n * acc / s_n;
}

double relative_phase_pdf_approx(double theta_rel, double beta) {
  if (!(beta >= 0.0)) throw InvalidArgument("pdf_approx: requires beta >= 0");
  const double i0s = bessel_i_scaled(0, beta);
  return std::exp(beta * (std::cos(theta_rel) - 1.0)) / (kTwoPi * i0s);
}

double mean_energy_approx(std::size_t n_spins, double beta) {
  if (n_spins == 0) throw InvalidArgument("mean_energy_approx: n_spins >= 1");
  return -static_cast<double>(n_spins) * bessel_ratio(beta);
}

double von_mises_cdf(double theta, double beta) {
  if (!(beta >= 0.0)) throw InvalidArgument("von_mises_cdf: requires beta >= 0");
  if (theta <= -kPi) return 0.0;
  if (theta >= kPi) return 1.0;
  // F(t) = (t+pi)/2pi + (1/pi) sum_{n>=1} (I_n/I_0) sin(n t)/n.
  const int terms = std::max(64, static_cast<int>(std::ceil(
                                     10.0 * std::sqrt(std::max(beta, 1.0)))));
  const auto scaled = bessel_i_scaled_array(terms, beta);
  double f = (theta + kPi) / kTwoPi;
  for (int n = 1; n <= terms; ++n) {
    const double ratio = scaled[static_cast<std::size_t>(n)] / scaled[0];
    if (ratio < 1e-17) break;
    f += ratio * std::sin(n * theta) / (kPi * n);
  }
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace nopo
