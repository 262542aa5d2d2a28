#pragma once

#include "aggnash/sync_engine.hpp"

#include <iosfwd>
#include <variant>

namespace aggnash {

struct Event {
  int first;   // I^k, the agent that woke up
  int second;  // J^k, the neighbor it contacted
};

/// Static-graph gossip: at each tick a uniformly random agent I wakes up and
/// contacts neighbor J with probability p_IJ.
class GossipModel {
 public:
  /// Uniform contact probabilities over neighbors.
  explicit GossipModel(Topology topology);
  GossipModel(Topology topology, Matrix contact_probs);

  const Topology& topology() const { return topology_; }
  int num_nodes() const { return topology_.num_nodes(); }
  const Matrix& contact_probs() const { return contact_; }
  /// p_i = (1/N)(1 + Σ_{j∈𝒩_i} p_ji): probability that i takes part in a tick.
  const Vector& update_probs() const { return update_; }
  double p_min() const { return update_.minCoeff(); }
  double p_max() const { return update_.maxCoeff(); }
  /// 1 + min over edges of p_ij.
  double phat() const;

 private:
  Topology topology_;
  Matrix contact_;
  Vector update_;
  // Per agent: neighbors and the cumulative contact distribution over them.
  std::vector<std::vector<int>> targets_;
  std::vector<std::vector<double>> cumulative_;

  friend Event draw_contact(const GossipModel& model, Rng& rng);
};

Event draw_contact(const GossipModel& model, Rng& rng);

/// Γ_k(i): updates executed by agent i up to and including tick k.
class UpdateTracker {
 public:
  explicit UpdateTracker(int num_nodes) : gamma_(num_nodes, 0) {}
  void record(const Event& e) {
    ++gamma_[e.first];
    ++gamma_[e.second];
  }
  long count(int i) const { return gamma_.at(i); }
  const std::vector<long>& counts() const { return gamma_; }

 private:
  std::vector<long> gamma_;
};

/// Pairwise averaging v̂_I = v̂_J = (v_I + v_J)/2, then the projected step and
/// estimate correction for I and J only; every other agent is left untouched.
/// `alpha_first`/`alpha_second` are the stepsizes of I and J at this tick.
void gossip_step(const GameInstance& game, NetworkState& state, const Event& event,
                 double alpha_first, double alpha_second);

/// The same tick written through W(k) = I − ½(e_I − e_J)(e_I − e_J)ᵀ and
/// participation indicators. Slower; kept as an independent cross-check.
NetworkState gossip_step_matrix_form(const GameInstance& game, const NetworkState& state,
                                     const Event& event, const Vector& alphas);

struct UpdateCountSteps {
  double scale = 1.0;  // α_{k,i} = scale / Γ_k(i)
};
struct ConstantSteps {
  Vector alphas;  // one per agent
};
using GossipStepsize = std::variant<UpdateCountSteps, ConstantSteps>;

/// Per-agent constants drawn from U(lo, hi).
ConstantSteps draw_constant_steps(int num_nodes, double lo, double hi, Rng& rng);

struct GossipObservation {
  long k;
  const Event& event;
  const NetworkState& state;  // after the tick
  const UpdateTracker& tracker;
  double alpha_first;
  double alpha_second;
};

using GossipHook = std::function<void(const GossipObservation&)>;

NetworkState run_gossip(const GameInstance& game, Profile x0, const GossipModel& model,
                        const GossipStepsize& stepsize, long iters, Rng& rng,
                        const GossipHook& hook = {});

/// Σ_i ‖v_i − y‖.
double total_disagreement(const NetworkState& state);

/// Writes "k,I,J" rows for a tick stream.
void write_event_trace(std::ostream& out, const std::vector<Event>& events);

}  // namespace aggnash
