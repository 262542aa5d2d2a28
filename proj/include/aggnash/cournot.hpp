#pragma once

#include "aggnash/game.hpp"
#include "aggnash/rng.hpp"

namespace aggnash::cournot {

/// Networked Nash-Cournot market. Player i produces g_il and sells s_il at
/// each location l; its decision is interleaved as (g_i1, s_i1, …, g_iL, s_iL).
/// Costs are c_il(g) = a_il g + b_il g², prices p_l(ū) = d_l − ū − e_l ū².
struct CournotParams {
  int num_players = 0;
  int num_locations = 0;
  Matrix a;    // N×L, linear cost
  Matrix b;    // N×L, quadratic cost (> 0)
  Vector d;    // L, price intercepts (> 0)
  Matrix cap;  // N×L, production caps (> 0); sales are capped by the same value
  /// L, price curvature (≥ 0; zero gives the affine price).
  Vector price_curvature;
  Relation coupling_relation = Relation::eq;

  void validate() const;
};

/// a ∼ U(2,12), b ∼ U(2,3), d ∼ U(90,100), cap = 500.
CournotParams sample_params(int num_players, int num_locations, Rng& rng);

double price(const CournotParams& p, int l, double u);
double price_slope(const CournotParams& p, int l, double u);

/// Player i's gradient map: per location (a + 2 b g, −p(u) − p′(u) s).
Vector gradient(const CournotParams& p, int i, const Vector& xi, const Vector& u);

/// Extracts the sales subvector.
Vector sales(const Vector& xi);
Vector production(const Vector& xi);

/// K_i = [0,cap]² per location with Σ_l g_il {=,≥} Σ_l s_il.
FeasibleSet feasible_set(const CournotParams& p, int i);

GameInstance build_game(const CournotParams& params);

/// Upper bound on the aggregate over K: Σ_i cap_il per location.
Vector max_aggregate(const CournotParams& p);

/// Closed-form Lipschitz constant of F_i in the aggregate:
/// √2·√Σ_l (C_l² + M_l² cap_il²), C_l = sup|p′_l|, M_l = Lipschitz constant of p′_l.
double lipschitz_bound_aggregate(const CournotParams& p, int i);

/// Closed-form Lipschitz constant of F_i in x_i: √Σ_l ((2 b_il)² + sup|p′_l|²).
double lipschitz_bound_decision(const CournotParams& p, int i);

}  // namespace aggnash::cournot
