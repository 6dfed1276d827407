#include "nopo/mcmc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "nopo/analytics.hpp"
#include "nopo/errors.hpp"

namespace nopo {

void McmcConfig::validate() const {
  if (!(beta >= 0.0)) throw InvalidArgument("McmcConfig: beta >= 0");
  if (!(proposal_width > 0.0 && proposal_width <= kPi)) {
    throw InvalidArgument("McmcConfig: proposal_width must lie in (0, pi]");
  }
  if (n_sweeps < 1) throw InvalidArgument("McmcConfig: n_sweeps >= 1");
  if (thin < 1) throw InvalidArgument("McmcConfig: thin >= 1");
}

int default_burn_in(double beta, std::size_t n_spins) {
  const auto n = static_cast<int>(n_spins);
  return beta <= 10.0 ? 10 * n : 100 * n;
}

double metropolis_sweep(PhaseConfig& config, const CouplingGraph& graph,
                        double beta, double proposal_width, PhiloxRng& rng,
                        UpdateOrder order) {
  const std::size_t n = config.n_spins();
  std::size_t accepted = 0;
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t k =
        order == UpdateOrder::sequential
            ? step
            : static_cast<std::size_t>(rng.next_double() * static_cast<double>(n));
    const double old_theta = config[k];
    const double new_theta =
        wrap_phase(old_theta + rng.next_uniform(-proposal_width, proposal_width));
    // Local energy difference over the incident edges only.
    const auto nbr = graph.neighbors(k);
    const auto w = graph.neighbor_weights(k);
    double delta_h = 0.0;
    for (std::size_t i = 0; i < nbr.size(); ++i) {
      const double tl = config[nbr[i]];
      delta_h -= w[i] * (std::cos(new_theta - tl) - std::cos(old_theta - tl));
    }
    if (delta_h <= 0.0 || rng.next_open_double() < std::exp(-beta * delta_h)) {
      config.set(k, new_theta);
      ++accepted;
    }
  }
  return static_cast<double>(accepted) / static_cast<double>(n);
}

std::vector<PhaseConfig> sample_chain(const McmcConfig& config,
                                      const CouplingGraph& graph) {
  PhiloxRng init_rng(config.seed, 0x1c0ffee);
  return sample_chain(config, graph,
                      PhaseConfig::uniform_random(graph.n_spins(), init_rng));
}

std::vector<PhaseConfig> sample_chain(const McmcConfig& config,
                                      const CouplingGraph& graph,
                                      PhaseConfig initial) {
  config.validate();
  if (initial.n_spins() != graph.n_spins()) {
    throw InvalidArgument("sample_chain: initial size does not match graph");
  }
  const int burn =
      config.burn_in >= 0 ? config.burn_in : default_burn_in(config.beta, graph.n_spins());
  PhiloxRng rng(config.seed, 0);
  double width = config.proposal_width;
  double recent_acceptance = 0.0;
  int recent_count = 0;
  for (int sweep = 0; sweep < burn; ++sweep) {
    recent_acceptance += metropolis_sweep(initial, graph, config.beta, width, rng);
    ++recent_count;
    if (config.auto_tune && recent_count == 50) {
      const double rate = recent_acceptance / recent_count;
      if (rate > 0.5) width = std::min(width * 1.2, kPi);
      if (rate < 0.3) width = std::max(width / 1.2, 1e-4);
      recent_acceptance = 0.0;
      recent_count = 0;
    }
  }
  std::vector<PhaseConfig> kept;
  kept.reserve(static_cast<std::size_t>(config.n_sweeps / config.thin) + 1);
  for (int sweep = 1; sweep <= config.n_sweeps; ++sweep) {
    metropolis_sweep(initial, graph, config.beta, width, rng);
    if (sweep % config.thin == 0) kept.push_back(initial);
  }
  return kept;
}

namespace {

constexpr int kTvBins = 36;

std::array<double, kTvBins> bin_probabilities(std::span<const double> samples) {
  std::array<double, kTvBins> p{};
  const double width = kTwoPi / kTvBins;
  for (double s : samples) {
    int b = static_cast<int>((wrap_phase(s) + kPi) / width);
    b = std::clamp(b, 0, kTvBins - 1);
    p[static_cast<std::size_t>(b)] += 1.0;
  }
  for (double& v : p) v /= static_cast<double>(samples.size());
  return p;
}

void check_size(std::span<const double> s, const char* which) {
  if (s.size() < 1000) {
    throw InvalidArgument(std::string("distribution_distance: sample set ") +
                          which + " needs >= 1000 points");
  }
}

}  // namespace

DistanceResult distribution_distance(std::span<const double> samples_a,
                                     std::span<const double> samples_b) {
  check_size(samples_a, "a");
  check_size(samples_b, "b");
  const auto pa = bin_probabilities(samples_a);
  const auto pb = bin_probabilities(samples_b);
  DistanceResult result;
  for (int b = 0; b < kTvBins; ++b) {
    result.tv_distance += std::abs(pa[static_cast<std::size_t>(b)] -
                                   pb[static_cast<std::size_t>(b)]);
  }
  result.tv_distance *= 0.5;

  std::vector<double> a(samples_a.begin(), samples_a.end());
  std::vector<double> b(samples_b.begin(), samples_b.end());
  for (double& v : a) v = wrap_phase(v);
  for (double& v : b) v = wrap_phase(v);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;  // step over ties on both sides
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  result.ks_statistic = d;
  return result;
}

DistanceResult distribution_distance_to_von_mises(std::span<const double> samples,
                                                  double beta) {
  check_size(samples, "a");
  const auto pa = bin_probabilities(samples);
  DistanceResult result;
  const double width = kTwoPi / kTvBins;
  for (int b = 0; b < kTvBins; ++b) {
    const double lo = -kPi + b * width;
    const double p_model = von_mises_cdf(lo + width, beta) - von_mises_cdf(lo, beta);
    result.tv_distance += std::abs(pa[static_cast<std::size_t>(b)] - p_model);
  }
  result.tv_distance *= 0.5;

  std::vector<double> a(samples.begin(), samples.end());
  for (double& v : a) v = wrap_phase(v);
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = von_mises_cdf(a[i], beta);
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  result.ks_statistic = d;
  return result;
}

double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
  // c(0.01) = 1.628, c(0.05) = 1.358 (asymptotic two-sample form).
  double c = 0.0;
  if (std::abs(alpha - 0.01) < 1e-12) {
    c = 1.628;
  } else if (std::abs(alpha - 0.05) < 1e-12) {
    c = 1.358;
  } else {
    throw InvalidArgument("ks_critical_value: alpha must be 0.01 or 0.05");
  }
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

}  // namespace nopo
