#pragma once

#include "aggnash/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace aggnash {

/// Disagreement bound for the synchronous method after k rounds:
/// θβᵏM + θNC Σ_{s=1..k} β^{k−s} α_{s−1}, θ = (1 − δ/(4N²))⁻², β = (1 − δ/(4N²))^{1/Q}.
/// `alphas` must hold at least k entries (α_0 … α_{k−1}).
double lemma4_bound(long k, int q, double delta, int num_players, double m, double c,
                    std::span<const double> alphas);

/// Evaluates the same bound for every k in [0, alphas.size()] in one pass.
std::vector<double> lemma4_bounds(int q, double delta, int num_players, double m, double c,
                                  std::span<const double> alphas);

struct Prop4Constants {
  double mu;          // strong monotonicity modulus of φ
  double C;           // gradient bound
  double B;           // (max_i L̄_i)·N·M
  int n;              // aggregate dimension
  int N;              // players
  double lambda;      // gossip mixing constant, in [0, 1)
  double p_min;
  double p_max;
  double alpha_min;
  double alpha_max;
  double max_L;       // max_i L_i, Lipschitz in the own decision
};

struct Prop4Result {
  /// 1 − 2μ p_min α_min + 2 p_max maxL (α_max − α_min); must lie in (0, 1).
  double q;
  /// Limit-superior bound on E‖x^k − x*‖².
  double bound;
  /// Closed form for α_min = α_max (only set in that case).
  std::optional<double> equal_steps_bound;
  /// Closed form for p_min = p_max (only set in that case).
  std::optional<double> equal_probs_bound;
};

/// Throws AssumptionError naming the violated inequality when q ∉ (0, 1).
Prop4Result prop4_bound(const Prop4Constants& c);

}  // namespace aggnash
