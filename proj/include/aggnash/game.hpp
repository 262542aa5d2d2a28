#pragma once

#include "aggnash/projection.hpp"
#include "aggnash/types.hpp"

#include <functional>
#include <random>

namespace aggnash {

/// F_i(x_i, u): the player's payoff gradient at its own decision and the
/// aggregate u ∈ ℝⁿ.
using GradientMap = std::function<Vector(const Vector& xi, const Vector& u)>;
/// h_i(x_i) ∈ ℝⁿ: the player's contribution to the aggregate.
using AggregateMap = std::function<Vector(const Vector& xi)>;

struct PlayerSpec {
  FeasibleSet feasible_set;
  GradientMap gradient;
  /// Empty means the identity map (requires dim == aggregate dim).
  AggregateMap aggregate;

  int dim() const { return feasible_set.dim(); }
};

/// An aggregative game. Immutable after construction.
class GameInstance {
 public:
  GameInstance(std::vector<PlayerSpec> players, int aggregate_dim);

  int num_players() const { return static_cast<int>(players_.size()); }
  int aggregate_dim() const { return aggregate_dim_; }
  const PlayerSpec& player(int i) const { return players_.at(i); }
  std::vector<int> dims() const;
  int total_dim() const;

  /// h_i(x_i), with the dimension checked.
  Vector contribution(int i, const Vector& xi) const;
  /// F_i(x_i, u), with the dimensions checked.
  Vector gradient(int i, const Vector& xi, const Vector& u) const;
  Vector project(int i, const Vector& z) const { return players_[i].feasible_set.project(z); }

  void check_profile(const Profile& x) const;
  bool bounded() const;

 private:
  std::vector<PlayerSpec> players_;
  int aggregate_dim_;
};

/// Σ_i h_i(x_i).
Vector aggregate(const GameInstance& game, const Profile& x);

/// φ(x) = (F_1(x_1, ū), …, F_N(x_N, ū)) with ū = Σ_j h_j(x_j) computed once.
Profile evaluate_phi(const GameInstance& game, const Profile& x);

/// Π_K(x) player by player.
Profile project_profile(const GameInstance& game, const Profile& x);

/// Random feasible profile: uniform on each bounding box, then projected.
Profile sample_profile(const GameInstance& game, std::mt19937_64& rng);

struct MonotonicityReport {
  double min_inner_product;
  double estimated_mu;
};

/// Samples pairs from K and reports min (φ(x)−φ(x′))ᵀ(x−x′) and the min of
/// that quantity over ‖x−x′‖². Pairs closer than 1e-12 are redrawn.
MonotonicityReport probe_monotonicity(const GameInstance& game, int sample_count,
                                      std::mt19937_64& rng);

struct LipschitzReport {
  double estimated_Lbar;  // in the aggregate argument
  double estimated_L;     // in the player's own decision
};

/// Max sampled difference quotients of F_i in u (over aggregates of feasible
/// profiles) and in x_i (at a fixed feasible aggregate).
LipschitzReport probe_lipschitz(const GameInstance& game, int player, int sample_count,
                                std::mt19937_64& rng);

/// Estimate of the Lipschitz constant of φ on K from sampled pairs refined by
/// power iteration on finite differences.
double probe_phi_lipschitz(const GameInstance& game, int sample_count, std::mt19937_64& rng);

/// max_i sup ‖F_i(x_i, u)‖ over sampled feasible x_i and aggregates u of
/// feasible profiles.
double probe_gradient_bound(const GameInstance& game, int sample_count, std::mt19937_64& rng);

}  // namespace aggnash
