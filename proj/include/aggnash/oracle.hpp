#pragma once

#include "aggnash/game.hpp"
#include "aggnash/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>

namespace aggnash {

struct CentralizedOptions {
  double step = 0.0;  // zero selects default_oracle_step
  double tol = 1e-12;
  long max_iters = 1'000'000;
};

struct CentralizedResult {
  Profile x;
  long iterations = 0;
  double residual = 0.0;  // ‖x − Π_K(x − step φ(x))‖∞
  double step = 0.0;
};

/// 1 / (L̂ + μ̂) from sampled probes of φ.
double default_oracle_step(const GameInstance& game, Rng& rng);

/// Full-information projected gradient x⁺ = Π_K[x − step φ(x)], iterated until
/// ‖x⁺ − x‖∞ ≤ tol. Starts from `x0` if given, else the projected box midpoint.
/// Throws ConvergenceError after max_iters.
CentralizedResult solve_centralized(const GameInstance& game, const CentralizedOptions& options,
                                    const std::optional<Profile>& x0 = std::nullopt,
                                    Rng* rng = nullptr);

/// ‖x − Π_K(x − step φ(x))‖∞.
double vi_residual(const GameInstance& game, const Profile& x, double step = 1.0);

struct BruteForceResult {
  Profile x;
  bool converged = false;
  int rounds = 0;
  std::vector<double> spacing;  // grid spacing per player (max over coordinates)
};

/// Best-response iteration where each best response is a grid search over the
/// player's own box. Payoff differences are recovered by Gauss–Legendre line
/// integrals of F_i from the box's lower corner, so only the gradient maps are
/// needed. `points_per_axis` ≥ 2 grid points per coordinate; total decision
/// dimension must not exceed 4. Non-convergence is reported, not thrown.
BruteForceResult brute_force_vi(const GameInstance& game, int points_per_axis,
                                int max_rounds = 200);

/// max_{i,c} |x − x*| / max_{i,c} |x*|.
double error_metric(const Profile& x, const Profile& x_star);

/// On-disk cache of equilibria keyed by (instance seed, parameter hash).
class OracleCache {
 public:
  explicit OracleCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::optional<Profile> load(std::uint64_t seed, std::uint64_t params_hash,
                              const std::vector<int>& dims) const;
  void store(std::uint64_t seed, std::uint64_t params_hash, const Profile& x) const;
  std::filesystem::path path_for(std::uint64_t seed, std::uint64_t params_hash) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace aggnash
