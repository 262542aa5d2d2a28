#pragma once

#include "aggnash/game.hpp"
#include "aggnash/graph.hpp"
#include "aggnash/rng.hpp"

#include <functional>

namespace aggnash {

/// Decisions x_i and aggregate-average estimates v_i (row i of `v`).
struct NetworkState {
  Profile x;
  Matrix v;
  long k = 0;

  Vector estimate(int i) const { return v.row(i).transpose(); }
  /// y = mean of the estimates.
  Vector mean_estimate() const { return v.colwise().mean().transpose(); }
};

/// v_i⁰ = h_i(x_i⁰).
NetworkState initial_state(const GameInstance& game, Profile x0);

/// |Σ_i v_i − Σ_i h_i(x_i)|∞ / (1 + |Σ_i h_i(x_i)|∞).
double conservation_residual(const GameInstance& game, const NetworkState& state);

struct StepsizeRule {
  enum class Kind { harmonic, constant };
  Kind kind = Kind::harmonic;
  /// harmonic: α_k = scale / (k + offset); constant: α_k = scale.
  double scale = 1.0;
  int offset = 1;

  static StepsizeRule harmonic(double c, int offset = 1) { return {Kind::harmonic, c, offset}; }
  static StepsizeRule constant(double alpha) { return {Kind::constant, alpha, 0}; }

  double at(long k) const {
    return kind == Kind::constant ? scale : scale / static_cast<double>(k + offset);
  }
};

/// One synchronous round: v̂ = W v; x_i⁺ = Π_i[x_i − α F_i(x_i, N v̂_i)];
/// v_i⁺ = v̂_i + h_i(x_i⁺) − h_i(x_i). `v_hat`, when given, receives W v.
NetworkState sync_step(const GameInstance& game, const NetworkState& state,
                       const WeightMatrix& weights, double alpha, Matrix* v_hat = nullptr);

/// Topology used at iteration k. Static schedules are queried once.
struct GraphSchedule {
  std::function<Topology(long k, Rng& rng)> next;
  bool dynamic = false;
  WeightRule rule = WeightRule::metropolis_half;

  static GraphSchedule fixed(Topology t, WeightRule rule = WeightRule::metropolis_half);
  /// A fresh random spanning tree (incremental attachment) every iteration.
  static GraphSchedule random_trees(int num_nodes);
  /// Replays a recorded sequence, cycling when k runs past its end.
  static GraphSchedule replay(std::vector<Topology> seq);
};

struct SyncObservation {
  long k;
  double alpha;
  const NetworkState& before;
  const Matrix& v_hat;
  const NetworkState& after;
  const Topology& topology;
  const WeightMatrix& weights;
  /// max_i ‖v̂_i − y‖ with y the mean estimate of `before`.
  double disagreement;
};

using SyncHook = std::function<void(const SyncObservation&)>;

struct SyncOptions {
  long iters = 0;
  /// When positive, every window of this many consecutive graphs must have a
  /// connected union; violations throw AssumptionError.
  int q_check = 0;
};

NetworkState run_sync(const GameInstance& game, Profile x0, const GraphSchedule& schedule,
                      const StepsizeRule& stepsize, const SyncOptions& options, Rng& rng,
                      const SyncHook& hook = {});

}  // namespace aggnash
