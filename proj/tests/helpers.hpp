#pragma once

#include "aggnash/game.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace testing {

using aggnash::FeasibleSet;
using aggnash::GameInstance;
using aggnash::PlayerSpec;
using aggnash::Vector;

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

/// N=1, K=[0,10], F(x,u)=x−3, h identity.
inline GameInstance scalar_game() {
  PlayerSpec p{FeasibleSet::box(vec({0.0}), vec({10.0})),
               [](const Vector& x, const Vector&) { return Vector((x.array() - 3.0).matrix()); },
               {}};
  return GameInstance({p}, 1);
}

/// Scalar players with F_i = q_i x_i + r_i u + c_i on [lo, hi].
inline GameInstance linear_scalar_game(const std::vector<double>& q, const std::vector<double>& r,
                                       const std::vector<double>& c, double lo, double hi) {
  std::vector<PlayerSpec> players;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double qi = q[i], ri = r[i], ci = c[i];
    players.push_back({FeasibleSet::box(vec({lo}), vec({hi})),
                       [=](const Vector& x, const Vector& u) { return vec({qi * x[0] + ri * u[0] + ci}); },
                       {}});
  }
  return GameInstance(std::move(players), 1);
}

using aggnash::LinearCoupling;
using aggnash::Relation;

// Enumerates active sets: every coordinate is at a bound or free, and the
// multiplier on the coupling is solved in closed form. The feasible candidate
// nearest to z is the projection.
inline Vector enumerate_projection(const Vector& z, const Vector& lo, const Vector& hi, const LinearCoupling& c) {
  const int n = static_cast<int>(z.size());
  double best = std::numeric_limits<double>::infinity();
  Vector best_y = z;
  auto consider = [&](const Vector& y) {
    if ((y - lo).minCoeff() < -1e-12 || (hi - y).minCoeff() < -1e-12) return;
    const double g = c.a.dot(y) - c.rhs;
    if (c.relation == Relation::eq ? std::abs(g) > 1e-9 : g < -1e-9) return;
    const double d = (y - z).squaredNorm();
    if (d < best) {
      best = d;
      best_y = y;
    }
  };
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    std::vector<int> state(n);
    for (int i = 0, r = code; i < n; ++i, r /= 3) state[i] = r % 3;
    Vector fixed = Vector::Zero(n);
    double fixed_sum = 0.0, free_aa = 0.0, free_az = 0.0;
    for (int i = 0; i < n; ++i) {
      if (state[i] == 0) fixed[i] = lo[i];
      if (state[i] == 1) fixed[i] = hi[i];
      if (state[i] == 2) {
        free_aa += c.a[i] * c.a[i];
        free_az += c.a[i] * z[i];
      } else {
        fixed_sum += c.a[i] * fixed[i];
      }
    }
    // Coupling inactive: free coordinates keep z.
    Vector y = fixed;
    for (int i = 0; i < n; ++i) if (state[i] == 2) y[i] = z[i];
    consider(y);
    if (free_aa > 0) {
      const double t = (c.rhs - fixed_sum - free_az) / free_aa;
      for (int i = 0; i < n; ++i) if (state[i] == 2) y[i] = z[i] + t * c.a[i];
      consider(y);
    }
  }
  return best_y;
}


/// Three players with decision dimensions 1, 2, 3 and scalar aggregate
/// u = Σ w_iᵀx_i. F_i(x_i, u) = Q_i x_i + c_i + ρ (u + w_iᵀx_i) w_i with Q_i
/// symmetric positive definite, so φ is strongly monotone.
inline GameInstance mixed_dimension_game(std::mt19937_64& rng, double rho = 0.5) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<PlayerSpec> players;
  for (int d = 1; d <= 3; ++d) {
    Eigen::MatrixXd a(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) a(r, c) = unit(rng);
    const Eigen::MatrixXd q = a * a.transpose() + Eigen::MatrixXd::Identity(d, d);
    Vector w(d), c(d);
    for (int r = 0; r < d; ++r) {
      w[r] = 0.5 + 0.5 * std::abs(unit(rng));
      c[r] = 3.0 * unit(rng) - 2.0;
    }
    players.push_back({FeasibleSet::box(Vector::Constant(d, -1.0), Vector::Constant(d, 4.0)),
                       [=](const Vector& x, const Vector& u) {
                         return Vector(q * x + c + rho * (u[0] + w.dot(x)) * w);
                       },
                       [=](const Vector& x) { return vec({w.dot(x)}); }});
  }
  return GameInstance(std::move(players), 1);
}

inline double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace testing
