#include "nopo/estimation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "nopo/analytics.hpp"
#include "nopo/errors.hpp"

namespace nopo {

DecayCurve decay_curve(std::span<const TrajectoryRecord> records) {
  if (records.empty()) throw InvalidArgument("decay_curve: empty ensemble");
  const auto& times = records.front().sample_times;
  if (times.size() < 2) {
    throw InvalidArgument("decay_curve: need at least 2 time points");
  }
  if (std::abs(times.front()) > 1e-12) {
    throw InvalidArgument("decay_curve: trajectories must carry a t = 0 snapshot");
  }
  for (const auto& rec : records) {
    if (rec.sample_times.size() != times.size()) {
      throw InvalidArgument("decay_curve: inconsistent sample times across ensemble");
    }
  }

  DecayCurve curve;
  curve.times = times;
  curve.mean_cosine.assign(times.size(), 0.0);
  curve.n_samples.assign(times.size(), 0);
  for (const auto& rec : records) {
    const auto rel0 = ring_relative_phases(rec.snapshots.front());
    for (std::size_t j = 0; j < times.size(); ++j) {
      const auto rel = ring_relative_phases(rec.snapshots[j]);
      double acc = 0.0;
      for (std::size_t k = 0; k < rel.size(); ++k) {
        acc += std::cos(rel[k] - rel0[k]);
      }
      curve.mean_cosine[j] += acc;
      curve.n_samples[j] += static_cast<std::int64_t>(rel.size());
    }
  }
  for (std::size_t j = 0; j < times.size(); ++j) {
    curve.mean_cosine[j] /= static_cast<double>(curve.n_samples[j]);
  }
  return curve;
}

DiffusionFit fit_diffusion(const DecayCurve& curve, double floor) {
  if (curve.times.size() < 3) {
    throw InvalidArgument("fit_diffusion: need at least 3 time points");
  }
  // Eq. of the trace forces intercept 1, so fit -log(c) = D*t through the
  // origin; the noise-dominated tail below `floor` would bias the log fit.
  std::vector<double> t, y;
  for (std::size_t j = 0; j < curve.times.size(); ++j) {
    if (curve.times[j] <= 0.0) continue;
    const double c = curve.mean_cosine[j];
    if (c < floor || c > 1.0) continue;
    t.push_back(curve.times[j]);
    y.push_back(-std::log(c));
  }
  if (t.size() < 2) {
    throw InvalidArgument(
        "fit_diffusion: no usable points above the noise floor");
  }
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  DiffusionFit fit;
  fit.d_theta = sty / stt;
  fit.n_points_used = static_cast<int>(t.size());
  double ss_res = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - fit.d_theta * t[i];
    ss_res += r * r;
  }
  fit.std_error = t.size() > 1
                      ? std::sqrt(ss_res / (static_cast<double>(t.size()) - 1.0) / stt)
                      : 0.0;
  return fit;
}

double besselratio_inverse(double r) {
  if (!(r >= 0.0) || r >= 1.0) {
    throw InvalidArgument("besselratio_inverse: r must lie in [0, 1)");
  }
  if (r == 0.0) return 0.0;
  if (r > 1.0 - 1e-12) {
    throw NumericError("besselratio_inverse: degenerate concentration, r -> 1");
  }
  // Bracket: A(beta) ~ beta/2 at small beta, 1 - 1/(2 beta) at large beta.
  double lo = 0.0;
  double hi = std::max(4.0 * r, 1.0 / (1.0 - r));
  while (bessel_ratio(hi) < r) hi *= 2.0;
  // Bisection with Newton refinement; A'(b) = 1 - A/b - A^2.
  double b = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double a = bessel_ratio(b);
    if (a > r) {
      hi = b;
    } else {
      lo = b;
    }
    const double deriv = 1.0 - a / b - a * a;
    double next = b - (a - r) / deriv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - b) <= 1e-10 * std::max(1.0, b)) return next;
    b = next;
  }
  return b;
}

namespace {

BetaEstimate beta_mle(std::span<const double> phases) {
  double sc = 0.0, ss = 0.0;
  for (double p : phases) {
    sc += std::cos(p);
    ss += std::sin(p);
  }
  const auto m = static_cast<double>(phases.size());
  const double r = std::sqrt(sc * sc + ss * ss) / m;
  BetaEstimate est;
  est.method = BetaMethod::mle;
  est.n_samples = static_cast<std::int64_t>(phases.size());
  est.mean_direction = std::atan2(ss, sc);
  if (r >= 1.0 - 1e-12) {
    throw NumericError("estimate_beta: degenerate concentration (all samples equal)");
  }
  est.beta_eff = besselratio_inverse(r);
  // Delta method with the von Mises Fisher information A'(beta) per sample.
  const double a = est.beta_eff > 0.0 ? bessel_ratio(est.beta_eff) : 0.0;
  const double fisher = est.beta_eff > 0.0
                            ? 1.0 - a / est.beta_eff - a * a
                            : 0.5;  // A'(0) = 1/2
  est.std_error = 1.0 / std::sqrt(m * std::max(fisher, 1e-300));
  return est;
}

BetaEstimate beta_histogram_fit(std::span<const double> phases) {
  constexpr int kBins = 36;
  const double width = kTwoPi / kBins;
  std::array<double, kBins> density{};
  for (double p : phases) {
    int b = static_cast<int>((wrap_phase(p) + kPi) / width);
    b = std::clamp(b, 0, kBins - 1);
    density[static_cast<std::size_t>(b)] += 1.0;
  }
  const auto m = static_cast<double>(phases.size());
  for (double& d : density) d /= m * width;

  std::array<double, kBins> centers{};
  for (int b = 0; b < kBins; ++b) centers[static_cast<std::size_t>(b)] = -kPi + (b + 0.5) * width;

  auto sse = [&](double beta) {
    double s = 0.0;
    for (int b = 0; b < kBins; ++b) {
      const double r = density[static_cast<std::size_t>(b)] -
                       relative_phase_pdf_approx(centers[static_cast<std::size_t>(b)], beta);
      s += r * r;
    }
    return s;
  };
  // Golden-section minimisation over beta >= 0; the objective is smooth and
  // unimodal in the usable range.
  double lo = 0.0;
  double hi = 4.0;
  while (sse(hi) < sse(0.75 * hi) && hi < 1e6) hi *= 2.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = sse(x1), f2 = sse(x2);
  for (int iter = 0; iter < 200 && (b - a) > 1e-10 * std::max(1.0, b); ++iter) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = sse(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = sse(x2);
    }
  }
  BetaEstimate est;
  est.method = BetaMethod::histogram_fit;
  est.n_samples = static_cast<std::int64_t>(phases.size());
  est.beta_eff = 0.5 * (a + b);

  // Fit covariance of the one-parameter least squares:
  // var(beta) = SSE/(B-1) / sum (dp/dbeta)^2, dp/dbeta = p (cos t - A).
  const double abeta = bessel_ratio(est.beta_eff);
  double jtj = 0.0;
  for (int bin = 0; bin < kBins; ++bin) {
    const double c = centers[static_cast<std::size_t>(bin)];
    const double dp = relative_phase_pdf_approx(c, est.beta_eff) *
                      (std::cos(c) - abeta);
    jtj += dp * dp;
  }
  const double sigma2 = sse(est.beta_eff) / (kBins - 1);
  est.std_error = std::sqrt(sigma2 / std::max(jtj, 1e-300));
  double sc = 0.0, ss = 0.0;
  for (double p : phases) {
    sc += std::cos(p);
    ss += std::sin(p);
  }
  est.mean_direction = std::atan2(ss, sc);
  return est;
}

}  // namespace

BetaEstimate estimate_beta(std::span<const double> relative_phases,
                           BetaMethod method) {
  if (relative_phases.size() < 10) {
    throw InvalidArgument("estimate_beta: need at least 10 samples");
  }
  return method == BetaMethod::mle ? beta_mle(relative_phases)
                                   : beta_histogram_fit(relative_phases);
}

EnergyEstimate mean_energy_of_samples(std::span<const TrajectoryRecord> records,
                                      const CouplingGraph& graph, double at_time) {
  if (records.empty()) throw InvalidArgument("mean_energy_of_samples: empty ensemble");
  std::vector<double> energies;
  energies.reserve(records.size());
  for (const auto& rec : records) {
    const std::size_t j = rec.index_of_time(at_time);
    energies.push_back(xy_energy(rec.snapshots[j], graph).value);
  }
  EnergyEstimate est;
  est.n_samples = static_cast<std::int64_t>(energies.size());
  double mean = 0.0;
  for (double e : energies) mean += e;
  mean /= static_cast<double>(energies.size());
  est.mean = mean;
  if (energies.size() > 1) {
    double ss = 0.0;
    for (double e : energies) ss += (e - mean) * (e - mean);
    est.std_dev = std::sqrt(ss / (static_cast<double>(energies.size()) - 1.0));
  }
  return est;
}

PhotonFluctuationStats photon_fluctuation_diagnostics(
    std::span<const TrajectoryRecord> records, const NetworkParams& params) {
  if (records.empty()) {
    throw InvalidArgument("photon_fluctuation_diagnostics: empty ensemble");
  }
  double sum_n = 0.0;
  std::int64_t count = 0;
  for (const auto& rec : records) {
    if (!rec.has_photon_numbers()) {
      throw InvalidArgument("photon_fluctuation_diagnostics: no photon data "
                            "(phase-only trajectories)");
    }
    for (const auto& snapshot : rec.photon_numbers) {
      for (double n : snapshot) {
        sum_n += n;
        ++count;
      }
    }
  }
  const double mean_n = sum_n / static_cast<double>(count);
  double mean_root = 0.0;
  for (const auto& rec : records) {
    for (const auto& snapshot : rec.photon_numbers) {
      for (double n : snapshot) mean_root += std::sqrt(n / mean_n);
    }
  }
  mean_root /= static_cast<double>(count);
  double ss = 0.0;
  for (const auto& rec : records) {
    for (const auto& snapshot : rec.photon_numbers) {
      for (double n : snapshot) {
        const double d = std::sqrt(n / mean_n) - mean_root;
        ss += d * d;
      }
    }
  }
  PhotonFluctuationStats stats;
  stats.mean_photon_number = mean_n;
  stats.delta = count > 1 ? std::sqrt(ss / (static_cast<double>(count) - 1.0)) : 0.0;
  stats.effective_j_spread = 2.0 * stats.delta;
  stats.beta_correction = params.diffusion_d > 0.0
                              ? params.gamma_inj * mean_n / params.diffusion_d
                              : 0.0;
  return stats;
}

double sample_von_mises(double beta, PhiloxRng& rng) {
  if (!(beta >= 0.0)) throw InvalidArgument("sample_von_mises: beta >= 0");
  if (beta < 1e-8) return rng.next_uniform(-kPi, kPi);
  // Best & Fisher (1979) wrapped-Cauchy envelope rejection.
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * beta * beta);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * beta);
  const double rr = (1.0 + rho * rho) / (2.0 * rho);
  for (;;) {
    const double z = std::cos(kPi * rng.next_double());
    const double f = (1.0 + rr * z) / (rr + z);
    const double c = beta * (rr - f);
    const double u2 = rng.next_open_double();
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double sign = rng.next_double() < 0.5 ? -1.0 : 1.0;
      return wrap_phase(sign * std::acos(f));
    }
  }
}

}  // namespace nopo
