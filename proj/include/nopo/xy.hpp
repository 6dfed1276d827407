#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "nopo/rng.hpp"

namespace nopo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Canonical wrap of an angle into [-pi, pi). Throws on non-finite input.
double wrap_phase(double angle);

/// A configuration of N planar spin angles, stored wrapped to [-pi, pi).
class PhaseConfig {
 public:
  explicit PhaseConfig(std::size_t n_spins);          // all zeros
  explicit PhaseConfig(std::vector<double> angles);   // wraps each entry

  static PhaseConfig uniform_random(std::size_t n_spins, PhiloxRng& rng);

  std::size_t n_spins() const { return theta_.size(); }
  double operator[](std::size_t k) const { return theta_[k]; }
  std::span<const double> angles() const { return theta_; }

  void set(std::size_t k, double angle);  // wraps

 private:
  std::vector<double> theta_;
};

struct Edge {
  std::uint32_t k;
  std::uint32_t l;
  double weight;
};

/// Sparse symmetric coupling matrix, stored once per unordered pair (k < l).
class CouplingGraph {
 public:
  CouplingGraph(std::size_t n_spins, std::vector<Edge> edges);

  /// Nearest-neighbour ring with uniform coupling j. Requires n >= 3: at
  /// n = 2 the wrap-around edge would duplicate (0,1) and silently double
  /// the coupling.
  static CouplingGraph ring(std::size_t n_spins, double j);

  std::size_t n_spins() const { return n_spins_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t n_edges() const { return edges_.size(); }
  std::size_t max_degree() const { return max_degree_; }
  double sum_abs_weights() const { return sum_abs_weights_; }

  /// Neighbours of spin k with the corresponding edge weights (CSR layout).
  std::span<const std::uint32_t> neighbors(std::size_t k) const;
  std::span<const double> neighbor_weights(std::size_t k) const;

 private:
  std::size_t n_spins_ = 0;
  std::vector<Edge> edges_;
  std::size_t max_degree_ = 0;
  double sum_abs_weights_ = 0.0;
  std::vector<std::size_t> adj_offset_;
  std::vector<std::uint32_t> adj_index_;
  std::vector<double> adj_weight_;
};

struct Energy {
  double value = 0.0;
};

/// H(theta) = -sum_{k<l} J_kl cos(theta_k - theta_l) over the edge list.
Energy xy_energy(const PhaseConfig& config, const CouplingGraph& graph);

/// Component k of dH/dtheta: sum_{l != k} J_kl sin(theta_k - theta_l).
std::vector<double> xy_energy_gradient(const PhaseConfig& config,
                                       const CouplingGraph& graph);

/// Ring-convention relative phases: wrap(theta_{k+1} - theta_k), indices
/// mod N, one value per spin.
std::vector<double> ring_relative_phases(const PhaseConfig& config);

}  // namespace nopo
