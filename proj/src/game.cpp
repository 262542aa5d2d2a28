#include "aggnash/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aggnash {

Vector flatten(const Profile& p) {
  Eigen::Index n = 0;
  for (const auto& b : p) n += b.size();
  Vector out(n);
  Eigen::Index off = 0;
  for (const auto& b : p) {
    out.segment(off, b.size()) = b;
    off += b.size();
  }
  return out;
}

Profile unflatten(const Vector& stacked, const std::vector<int>& dims) {
  Profile p;
  p.reserve(dims.size());
  Eigen::Index off = 0;
  for (int d : dims) {
    if (off + d > stacked.size()) throw Error("unflatten: stacked vector too short");
    p.emplace_back(stacked.segment(off, d));
    off += d;
  }
  if (off != stacked.size()) throw Error("unflatten: stacked vector too long");
  return p;
}

GameInstance::GameInstance(std::vector<PlayerSpec> players, int aggregate_dim)
    : players_(std::move(players)), aggregate_dim_(aggregate_dim) {
  if (players_.empty()) throw Error("a game needs at least one player");
  if (aggregate_dim_ < 1) throw Error("aggregate dimension must be positive");
  for (int i = 0; i < num_players(); ++i) {
    const auto& p = players_[i];
    if (!p.gradient) throw DimensionError(i, "missing gradient map");
    if (!p.aggregate && p.dim() != aggregate_dim_) {
      throw DimensionError(i, "identity aggregate requires decision dimension " +
                                  std::to_string(aggregate_dim_));
    }
    // Dimension check of h_i at a feasible point.
    Vector ref = p.feasible_set.lower().cwiseMax(-1.0).cwiseMin(p.feasible_set.upper());
    contribution(i, p.feasible_set.project(ref));
  }
}

std::vector<int> GameInstance::dims() const {
  std::vector<int> d;
  d.reserve(players_.size());
  for (const auto& p : players_) d.push_back(p.dim());
  return d;
}

int GameInstance::total_dim() const {
  int n = 0;
  for (const auto& p : players_) n += p.dim();
  return n;
}

Vector GameInstance::contribution(int i, const Vector& xi) const {
  const auto& p = players_.at(i);
  if (xi.size() != p.dim()) {
    throw DimensionError(i, "decision has dimension " + std::to_string(xi.size()) +
                                ", expected " + std::to_string(p.dim()));
  }
  if (!p.aggregate) return xi;
  Vector h = p.aggregate(xi);
  if (h.size() != aggregate_dim_) {
    throw DimensionError(i, "aggregate map returned dimension " + std::to_string(h.size()) +
                                ", expected " + std::to_string(aggregate_dim_));
  }
  return h;
}

Vector GameInstance::gradient(int i, const Vector& xi, const Vector& u) const {
  const auto& p = players_.at(i);
  if (xi.size() != p.dim()) {
    throw DimensionError(i, "decision has dimension " + std::to_string(xi.size()) +
                                ", expected " + std::to_string(p.dim()));
  }
  if (u.size() != aggregate_dim_) {
    throw DimensionError(i, "aggregate argument has dimension " + std::to_string(u.size()));
  }
  Vector g = p.gradient(xi, u);
  if (g.size() != p.dim()) {
    throw DimensionError(i, "gradient map returned dimension " + std::to_string(g.size()));
  }
  return g;
}

void GameInstance::check_profile(const Profile& x) const {
  if (static_cast<int>(x.size()) != num_players()) {
    throw Error("profile has " + std::to_string(x.size()) + " blocks for " +
                std::to_string(num_players()) + " players");
  }
  for (int i = 0; i < num_players(); ++i) {
    if (x[i].size() != players_[i].dim()) {
      throw DimensionError(i, "decision has dimension " + std::to_string(x[i].size()) +
                                  ", expected " + std::to_string(players_[i].dim()));
    }
  }
}

bool GameInstance::bounded() const {
  return std::all_of(players_.begin(), players_.end(),
                     [](const PlayerSpec& p) { return p.feasible_set.bounded(); });
}

Vector aggregate(const GameInstance& game, const Profile& x) {
  game.check_profile(x);
  Vector u = Vector::Zero(game.aggregate_dim());
  for (int i = 0; i < game.num_players(); ++i) u += game.contribution(i, x[i]);
  return u;
}

Profile evaluate_phi(const GameInstance& game, const Profile& x) {
  const Vector u = aggregate(game, x);
  Profile out;
  out.reserve(x.size());
  for (int i = 0; i < game.num_players(); ++i) out.push_back(game.gradient(i, x[i], u));
  return out;
}

Profile project_profile(const GameInstance& game, const Profile& x) {
  game.check_profile(x);
  Profile out;
  out.reserve(x.size());
  for (int i = 0; i < game.num_players(); ++i) out.push_back(game.project(i, x[i]));
  return out;
}

Profile sample_profile(const GameInstance& game, std::mt19937_64& rng) {
  if (!game.bounded()) throw AssumptionError("sampling requires bounded feasible sets");
  Profile x;
  x.reserve(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) x.push_back(game.player(i).feasible_set.sample(rng));
  return x;
}

MonotonicityReport probe_monotonicity(const GameInstance& game, int sample_count,
                                      std::mt19937_64& rng) {
  MonotonicityReport r{std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity()};
  for (int s = 0; s < sample_count; ++s) {
    Vector x, y;
    do {
      x = flatten(sample_profile(game, rng));
      y = flatten(sample_profile(game, rng));
    } while ((x - y).norm() < 1e-12);
    const auto dims = game.dims();
    const Vector fx = flatten(evaluate_phi(game, unflatten(x, dims)));
    const Vector fy = flatten(evaluate_phi(game, unflatten(y, dims)));
    const double ip = (fx - fy).dot(x - y);
    r.min_inner_product = std::min(r.min_inner_product, ip);
    r.estimated_mu = std::min(r.estimated_mu, ip / (x - y).squaredNorm());
  }
  return r;
}

LipschitzReport probe_lipschitz(const GameInstance& game, int player, int sample_count,
                                std::mt19937_64& rng) {
  if (player < 0 || player >= game.num_players()) throw Error("player index out of range");
  const FeasibleSet& set = game.player(player).feasible_set;
  LipschitzReport r{0.0, 0.0};
  for (int s = 0; s < sample_count; ++s) {
    const Vector xi = set.sample(rng);
    const Vector u = aggregate(game, sample_profile(game, rng));
    const Vector z = aggregate(game, sample_profile(game, rng));
    if ((u - z).norm() > 1e-12) {
      r.estimated_Lbar = std::max(r.estimated_Lbar, (game.gradient(player, xi, u) -
                                                     game.gradient(player, xi, z)).norm() /
                                                        (u - z).norm());
    }
    const Vector yi = set.sample(rng);
    if ((xi - yi).norm() > 1e-12) {
      r.estimated_L = std::max(r.estimated_L, (game.gradient(player, xi, u) -
                                               game.gradient(player, yi, u)).norm() /
                                                  (xi - yi).norm());
    }
  }
  return r;
}

double probe_phi_lipschitz(const GameInstance& game, int sample_count, std::mt19937_64& rng) {
  const auto dims = game.dims();
  auto phi = [&](const Vector& x) { return flatten(evaluate_phi(game, unflatten(x, dims))); };
  double best = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    const Vector x = flatten(sample_profile(game, rng));
    const Vector y = flatten(sample_profile(game, rng));
    Vector d = y - x;
    if (d.norm() < 1e-12) continue;
    const Vector fx = phi(x);
    best = std::max(best, (phi(y) - fx).norm() / d.norm());
    // Power iteration on the difference quotient.
    const double h = 1e-3 * std::max(1.0, x.norm());
    d.normalize();
    for (int it = 0; it < 30; ++it) {
      Vector jd = (phi(x + h * d) - fx) / h;
      const double q = jd.norm();
      best = std::max(best, q);
      if (q == 0.0) break;
      d = jd / q;
    }
  }
  return best;
}

double probe_gradient_bound(const GameInstance& game, int sample_count, std::mt19937_64& rng) {
  double c = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    const Profile x = sample_profile(game, rng);
    const Vector u = aggregate(game, sample_profile(game, rng));
    for (int i = 0; i < game.num_players(); ++i) {
      c = std::max(c, game.gradient(i, x[i], u).norm());
    }
  }
  return c;
}

}  // namespace aggnash
