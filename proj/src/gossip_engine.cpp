#include "aggnash/gossip_engine.hpp"

#include <algorithm>
#include <ostream>

namespace aggnash {

GossipModel::GossipModel(Topology topology)
    : GossipModel(topology, uniform_contact_probs(topology)) {}

GossipModel::GossipModel(Topology topology, Matrix contact_probs)
    : topology_(std::move(topology)), contact_(std::move(contact_probs)) {
  if (!topology_.connected()) throw AssumptionError("gossip requires a connected graph");
  update_ = update_probabilities(topology_, contact_);
  const int n = topology_.num_nodes();
  targets_.resize(n);
  cumulative_.resize(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j : topology_.neighbors(i)) {
      if (contact_(i, j) <= 0.0) continue;
      acc += contact_(i, j);
      targets_[i].push_back(j);
      cumulative_[i].push_back(acc);
    }
    cumulative_[i].back() = 1.0;
  }
}

double GossipModel::phat() const {
  double m = 1.0;
  for (const auto& [i, j] : topology_.edges()) m = std::min({m, contact_(i, j), contact_(j, i)});
  return 1.0 + m;
}

Event draw_contact(const GossipModel& model, Rng& rng) {
  std::uniform_int_distribution<int> agent(0, model.num_nodes() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int i = agent(rng);
  const auto& cum = model.cumulative_[i];
  const double r = unit(rng);
  const auto pos = std::upper_bound(cum.begin(), cum.end(), r) - cum.begin();
  const int j = model.targets_[i][std::min<std::ptrdiff_t>(pos, cum.size() - 1)];
  return {i, j};
}

namespace {

void update_agent(const GameInstance& game, NetworkState& state, int i, const Vector& v_hat,
                  double alpha) {
  const int n = game.num_players();
  Vector x_new;
  try {
    x_new = game.project(i, state.x[i] - alpha * game.gradient(i, state.x[i], n * v_hat));
  } catch (const ProjectionError& e) {
    throw ProjectionError("player " + std::to_string(i) + " at tick " + std::to_string(state.k) +
                              ": " + e.what(),
                          e.residual());
  }
  state.v.row(i) =
      (v_hat + game.contribution(i, x_new) - game.contribution(i, state.x[i])).transpose();
  state.x[i] = std::move(x_new);
}

}  // namespace

void gossip_step(const GameInstance& game, NetworkState& state, const Event& event,
                 double alpha_first, double alpha_second) {
  const int n = game.num_players();
  if (event.first < 0 || event.second < 0 || event.first >= n || event.second >= n ||
      event.first == event.second) {
    throw Error("invalid gossip event");
  }
  const Vector v_hat = 0.5 * (state.v.row(event.first) + state.v.row(event.second)).transpose();
  update_agent(game, state, event.first, v_hat, alpha_first);
  update_agent(game, state, event.second, v_hat, alpha_second);
  ++state.k;
}

NetworkState gossip_step_matrix_form(const GameInstance& game, const NetworkState& state,
                                     const Event& event, const Vector& alphas) {
  const int n = game.num_players();
  const Matrix w = gossip_event_matrix(n, event.first, event.second);
  const Matrix v_hat = w * state.v;
  NetworkState next;
  next.x.resize(n);
  next.v.resize(n, game.aggregate_dim());
  next.k = state.k + 1;
  for (int i = 0; i < n; ++i) {
    const bool active = i == event.first || i == event.second;
    const Vector vi = v_hat.row(i).transpose();
    next.x[i] = active
                    ? game.project(i, state.x[i] - alphas[i] * game.gradient(i, state.x[i], n * vi))
                    : state.x[i];
    if (active) {
      next.v.row(i) =
          (vi + game.contribution(i, next.x[i]) - game.contribution(i, state.x[i])).transpose();
    } else {
      next.v.row(i) = v_hat.row(i);
    }
  }
  return next;
}

ConstantSteps draw_constant_steps(int num_nodes, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  ConstantSteps s{Vector(num_nodes)};
  for (int i = 0; i < num_nodes; ++i) s.alphas[i] = u(rng);
  return s;
}

NetworkState run_gossip(const GameInstance& game, Profile x0, const GossipModel& model,
                        const GossipStepsize& stepsize, long iters, Rng& rng,
                        const GossipHook& hook) {
  if (model.num_nodes() != game.num_players()) {
    throw Error("gossip graph size does not match the number of players");
  }
  if (const auto* c = std::get_if<ConstantSteps>(&stepsize);
      c && c->alphas.size() != game.num_players()) {
    throw Error("constant stepsizes need one value per agent");
  }
  NetworkState state = initial_state(game, std::move(x0));
  UpdateTracker tracker(game.num_players());
  for (long k = 0; k < iters; ++k) {
    const Event e = draw_contact(model, rng);
    tracker.record(e);
    double a1, a2;
    if (const auto* u = std::get_if<UpdateCountSteps>(&stepsize)) {
      a1 = u->scale / static_cast<double>(tracker.count(e.first));
      a2 = u->scale / static_cast<double>(tracker.count(e.second));
    } else {
      const auto& c = std::get<ConstantSteps>(stepsize);
      a1 = c.alphas[e.first];
      a2 = c.alphas[e.second];
    }
    gossip_step(game, state, e, a1, a2);
    if (hook) hook(GossipObservation{k, e, state, tracker, a1, a2});
  }
  return state;
}

double total_disagreement(const NetworkState& state) {
  const Eigen::RowVectorXd y = state.v.colwise().mean();
  double s = 0.0;
  for (Eigen::Index i = 0; i < state.v.rows(); ++i) s += (state.v.row(i) - y).norm();
  return s;
}

void write_event_trace(std::ostream& out, const std::vector<Event>& events) {
  out << "k,I,J\n";
  for (std::size_t k = 0; k < events.size(); ++k) {
    out << k << ',' << events[k].first << ',' << events[k].second << '\n';
  }
}

}  // namespace aggnash
