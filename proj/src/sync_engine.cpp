#include "aggnash/sync_engine.hpp"

#include <deque>

namespace aggnash {

NetworkState initial_state(const GameInstance& game, Profile x0) {
  game.check_profile(x0);
  NetworkState s;
  s.v.resize(game.num_players(), game.aggregate_dim());
  for (int i = 0; i < game.num_players(); ++i) {
    s.v.row(i) = game.contribution(i, x0[i]).transpose();
  }
  s.x = std::move(x0);
  s.k = 0;
  return s;
}

double conservation_residual(const GameInstance& game, const NetworkState& state) {
  const Vector h = aggregate(game, state.x);
  const Vector sv = state.v.colwise().sum().transpose();
  return (sv - h).lpNorm<Eigen::Infinity>() / (1.0 + h.lpNorm<Eigen::Infinity>());
}

namespace {

Vector projected_update(const GameInstance& game, int i, const Vector& xi, const Vector& u,
                        double alpha, long k) {
  try {
    return game.project(i, xi - alpha * game.gradient(i, xi, u));
  } catch (const ProjectionError& e) {
    throw ProjectionError("player " + std::to_string(i) + " at iteration " + std::to_string(k) +
                              ": " + e.what(),
                          e.residual());
  }
}

}  // namespace

NetworkState sync_step(const GameInstance& game, const NetworkState& state,
                       const WeightMatrix& weights, double alpha, Matrix* v_hat) {
  const int n = game.num_players();
  if (weights.w.rows() != n || weights.w.cols() != n) {
    throw Error("weight matrix does not match the number of players");
  }
  if (alpha < 0.0) throw Error("stepsize must be nonnegative");
  Matrix mixed = weights.w * state.v;
  NetworkState next;
  next.x.resize(n);
  next.v.resize(n, game.aggregate_dim());
  next.k = state.k + 1;
  for (int i = 0; i < n; ++i) {
    const Vector vi = mixed.row(i).transpose();
    next.x[i] = alpha == 0.0 ? state.x[i]
                             : projected_update(game, i, state.x[i], n * vi, alpha, state.k);
    next.v.row(i) = (vi + game.contribution(i, next.x[i]) - game.contribution(i, state.x[i]))
                        .transpose();
  }
  if (v_hat) *v_hat = std::move(mixed);
  return next;
}

GraphSchedule GraphSchedule::fixed(Topology t, WeightRule rule) {
  return {[t = std::move(t)](long, Rng&) { return t; }, false, rule};
}

GraphSchedule GraphSchedule::random_trees(int num_nodes) {
  return {[num_nodes](long, Rng& rng) {
            return build_topology(TopologyKind::random_connected, num_nodes, &rng);
          },
          true, WeightRule::metropolis_half};
}

GraphSchedule GraphSchedule::replay(std::vector<Topology> seq) {
  if (seq.empty()) throw Error("cannot replay an empty graph sequence");
  return {[seq = std::move(seq)](long k, Rng&) { return seq[k % seq.size()]; }, true,
          WeightRule::metropolis_half};
}

NetworkState run_sync(const GameInstance& game, Profile x0, const GraphSchedule& schedule,
                      const StepsizeRule& stepsize, const SyncOptions& options, Rng& rng,
                      const SyncHook& hook) {
  if (!schedule.next) throw Error("graph schedule has no provider");
  NetworkState state = initial_state(game, std::move(x0));
  std::optional<Topology> topology;
  WeightMatrix weights;
  std::deque<Topology> window;
  Matrix v_hat;
  for (long k = 0; k < options.iters; ++k) {
    if (!topology || schedule.dynamic) {
      topology = schedule.next(k, rng);
      if (topology->num_nodes() != game.num_players()) {
        throw Error("graph size does not match the number of players");
      }
      weights = build_weights(*topology, schedule.rule);
    }
    if (options.q_check > 0) {
      window.push_back(*topology);
      if (static_cast<int>(window.size()) > options.q_check) window.pop_front();
      if (static_cast<int>(window.size()) == options.q_check &&
          !check_q_connectivity({window.begin(), window.end()}, options.q_check)) {
        throw AssumptionError("graph window ending at iteration " + std::to_string(k) +
                              " is not connected");
      }
    }
    const double alpha = stepsize.at(k);
    NetworkState next = sync_step(game, state, weights, alpha, hook ? &v_hat : nullptr);
    if (hook) {
      const Vector y = state.mean_estimate();
      double dis = 0.0;
      for (int i = 0; i < game.num_players(); ++i) {
        dis = std::max(dis, (v_hat.row(i).transpose() - y).norm());
      }
      hook(SyncObservation{k, alpha, state, v_hat, next, *topology, weights, dis});
    }
    state = std::move(next);
  }
  return state;
}

}  // namespace aggnash
