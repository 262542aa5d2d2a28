#pragma once

#include "aggnash/rng.hpp"
#include "aggnash/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace aggnash {

/// Undirected simple graph on nodes 0..N-1. Self-communication is implicit.
class Topology {
 public:
  using Edge = std::pair<int, int>;

  explicit Topology(int num_nodes, std::vector<Edge> edges = {});

  int num_nodes() const { return n_; }
  /// Sorted, each stored once as (min, max).
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int i) const { return adj_.at(i); }
  int degree(int i) const { return static_cast<int>(adj_.at(i).size()); }
  int max_degree() const;
  bool has_edge(int i, int j) const;
  bool connected() const;

  friend bool operator==(const Topology& x, const Topology& y) {
    return x.n_ == y.n_ && x.edges_ == y.edges_;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

enum class TopologyKind { cycle, wheel, grid, complete, random_connected };

TopologyKind parse_topology_kind(const std::string& name);
std::string to_string(TopologyKind kind);

/// Grid rows hold five nodes each; wheel's hub is node 0; random_connected
/// attaches each new node to a uniformly chosen earlier node.
Topology build_topology(TopologyKind kind, int num_nodes, Rng* rng = nullptr);

enum class WeightRule {
  /// w_ij = δ on edges, w_ii = 1 − δ d(i), δ = 0.5 / max degree.
  metropolis_half,
  /// w_ij = 1/N; only valid on the complete graph.
  full_averaging,
};

WeightRule parse_weight_rule(const std::string& name);
std::string to_string(WeightRule rule);

struct WeightMatrix {
  Matrix w;
  double delta = 0.0;
};

WeightMatrix build_weights(const Topology& topology, WeightRule rule = WeightRule::metropolis_half);

/// Assumption check for a synchronous weight matrix on `topology`: nonnegative,
/// rows and columns sum to one within `tol`, w_ij ≥ δ exactly on edges and the
/// diagonal, zero elsewhere. Returns an empty string when all checks pass.
std::string check_weights(const WeightMatrix& w, const Topology& topology, double tol = 1e-12);

/// Every window of Q consecutive graphs has a connected union.
bool check_q_connectivity(const std::vector<Topology>& seq, int q);

/// W(end)·W(end−1)⋯W(begin).
Matrix transition_product(const std::vector<WeightMatrix>& seq, int end, int begin);

struct TransitionBoundParams {
  double theta;
  double beta;
};

/// θ = (1 − δ/(4N²))⁻², β = (1 − δ/(4N²))^{1/Q}.
TransitionBoundParams transition_bound_params(int num_nodes, int q, double delta);

struct TransitionBoundReport {
  /// max over (i, j, k, s) of |Φ(k,s)_ij − 1/N| − θ β^{k−s}; ≤ 0 means the bound holds.
  double max_violation;
  double theta;
  double beta;
};

/// Requires Q-connectivity of `topologies` and the weight assumptions with a
/// common floor `delta` (throws AssumptionError otherwise).
TransitionBoundReport transition_bound_check(const std::vector<Topology>& topologies,
                                             const std::vector<WeightMatrix>& weights, int q,
                                             double delta);

/// Row i of the result holds p_ij (zero off the neighborhood).
Matrix uniform_contact_probs(const Topology& topology);

/// W = I − ½(e_I − e_J)(e_I − e_J)ᵀ.
Matrix gossip_event_matrix(int num_nodes, int i, int j);

struct MixingReport {
  Matrix expected_w;
  /// Largest eigenvalue of E[DᵀD], D = W − 𝟏𝟏ᵀ/N.
  double lambda;
  /// Second-largest eigenvalue of E[W].
  double second_eigenvalue_expected_w;
};

/// Enumerates all events (I, J) with probability p_IJ / N.
MixingReport gossip_expected_mixing(const Topology& topology, const Matrix& contact_probs);

/// p_i = (1/N)(1 + Σ_{j∈𝒩_i} p_ji).
Vector update_probabilities(const Topology& topology, const Matrix& contact_probs);

void validate_contact_probs(const Topology& topology, const Matrix& contact_probs);

}  // namespace aggnash
