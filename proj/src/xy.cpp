#include "nopo/xy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "nopo/errors.hpp"

namespace nopo {

double wrap_phase(double angle) {
  if (!std::isfinite(angle)) {
    throw InvalidArgument("wrap_phase: non-finite angle");
  }
  double w = std::remainder(angle, kTwoPi);  // (-pi, pi]
  if (w >= kPi) w -= kTwoPi;                 // remainder can return exactly pi
  return w;
}

PhaseConfig::PhaseConfig(std::size_t n_spins) : theta_(n_spins, 0.0) {
  if (n_spins == 0) throw InvalidArgument("PhaseConfig: n_spins must be >= 1");
}

PhaseConfig::PhaseConfig(std::vector<double> angles) : theta_(std::move(angles)) {
  if (theta_.empty()) throw InvalidArgument("PhaseConfig: empty angle vector");
  for (double& t : theta_) t = wrap_phase(t);
}

PhaseConfig PhaseConfig::uniform_random(std::size_t n_spins, PhiloxRng& rng) {
  PhaseConfig c(n_spins);
  for (std::size_t k = 0; k < n_spins; ++k) {
    c.theta_[k] = rng.next_uniform(-kPi, kPi);
  }
  return c;
}

void PhaseConfig::set(std::size_t k, double angle) {
  theta_.at(k) = wrap_phase(angle);
}

CouplingGraph::CouplingGraph(std::size_t n_spins, std::vector<Edge> edges)
    : n_spins_(n_spins), edges_(std::move(edges)) {
  if (n_spins_ == 0) throw InvalidArgument("CouplingGraph: n_spins must be >= 1");
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::vector<std::size_t> degree(n_spins_, 0);
  for (const Edge& e : edges_) {
    if (e.k >= e.l) {
      throw InvalidArgument("CouplingGraph: edges must satisfy k < l, got (" +
                            std::to_string(e.k) + "," + std::to_string(e.l) + ")");
    }
    if (e.l >= n_spins_) {
      throw InvalidArgument("CouplingGraph: spin index " + std::to_string(e.l) +
                            " out of range for N = " + std::to_string(n_spins_));
    }
    if (!std::isfinite(e.weight)) {
      throw InvalidArgument("CouplingGraph: non-finite edge weight");
    }
    if (!seen.insert({e.k, e.l}).second) {
      throw InvalidArgument("CouplingGraph: duplicate edge (" +
                            std::to_string(e.k) + "," + std::to_string(e.l) + ")");
    }
    degree[e.k]++;
    degree[e.l]++;
    sum_abs_weights_ += std::abs(e.weight);
  }
  max_degree_ = degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());

  // CSR adjacency for local updates (Metropolis, drift loops).
  adj_offset_.assign(n_spins_ + 1, 0);
  for (const Edge& e : edges_) {
    adj_offset_[e.k + 1]++;
    adj_offset_[e.l + 1]++;
  }
  for (std::size_t k = 0; k < n_spins_; ++k) adj_offset_[k + 1] += adj_offset_[k];
  adj_index_.resize(2 * edges_.size());
  adj_weight_.resize(2 * edges_.size());
  std::vector<std::size_t> cursor(adj_offset_.begin(), adj_offset_.end() - 1);
  for (const Edge& e : edges_) {
    adj_index_[cursor[e.k]] = e.l;
    adj_weight_[cursor[e.k]++] = e.weight;
    adj_index_[cursor[e.l]] = e.k;
    adj_weight_[cursor[e.l]++] = e.weight;
  }
}

CouplingGraph CouplingGraph::ring(std::size_t n_spins, double j) {
  if (n_spins < 3) {
    throw InvalidArgument("ring: need n >= 3 (a 2-ring double-counts its edge)");
  }
  std::vector<Edge> edges;
  edges.reserve(n_spins);
  for (std::uint32_t k = 0; k + 1 < n_spins; ++k) {
    edges.push_back({k, k + 1, j});
  }
  edges.push_back({0, static_cast<std::uint32_t>(n_spins - 1), j});
  return CouplingGraph(n_spins, std::move(edges));
}

std::span<const std::uint32_t> CouplingGraph::neighbors(std::size_t k) const {
  return {adj_index_.data() + adj_offset_[k], adj_offset_[k + 1] - adj_offset_[k]};
}

std::span<const double> CouplingGraph::neighbor_weights(std::size_t k) const {
  return {adj_weight_.data() + adj_offset_[k], adj_offset_[k + 1] - adj_offset_[k]};
}

namespace {
void check_dimensions(const PhaseConfig& config, const CouplingGraph& graph,
                      const char* op) {
  if (config.n_spins() != graph.n_spins()) {
    throw InvalidArgument(std::string(op) + ": config has " +
                          std::to_string(config.n_spins()) + " spins, graph has " +
                          std::to_string(graph.n_spins()));
  }
}
}  // namespace

Energy xy_energy(const PhaseConfig& config, const CouplingGraph& graph) {
  check_dimensions(config, graph, "xy_energy");
  double e = 0.0;
  for (const Edge& edge : graph.edges()) {
    e -= edge.weight * std::cos(config[edge.k] - config[edge.l]);
  }
  return Energy{e};
}

std::vector<double> xy_energy_gradient(const PhaseConfig& config,
                                       const CouplingGraph& graph) {
  check_dimensions(config, graph, "xy_energy_gradient");
  std::vector<double> grad(config.n_spins(), 0.0);
  for (const Edge& edge : graph.edges()) {
    const double s = edge.weight * std::sin(config[edge.k] - config[edge.l]);
    grad[edge.k] += s;
    grad[edge.l] -= s;
  }
  return grad;
}

std::vector<double> ring_relative_phases(const PhaseConfig& config) {
  const std::size_t n = config.n_spins();
  std::vector<double> rel(n);
  for (std::size_t k = 0; k < n; ++k) {
    rel[k] = wrap_phase(config[(k + 1) % n] - config[k]);
  }
  return rel;
}

}  // namespace nopo
