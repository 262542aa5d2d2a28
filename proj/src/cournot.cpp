#include "aggnash/cournot.hpp"

#include <cmath>

namespace aggnash::cournot {

void CournotParams::validate() const {
  const int n = num_players;
  const int l = num_locations;
  if (n < 1) throw Error("cournot: need at least one player");
  if (l < 1) throw Error("cournot: need at least one location");
  if (a.rows() != n || a.cols() != l || b.rows() != n || b.cols() != l || cap.rows() != n ||
      cap.cols() != l || d.size() != l) {
    throw Error("cournot: parameter shapes do not match N×L");
  }
  if (price_curvature.size() != 0 && price_curvature.size() != l) {
    throw Error("cournot: price curvature must have one entry per location");
  }
  if ((b.array() <= 0).any()) throw Error("cournot: quadratic cost coefficients must be positive");
  if ((cap.array() <= 0).any()) throw Error("cournot: capacities must be positive");
  if ((d.array() <= 0).any()) throw Error("cournot: price intercepts must be positive");
  if (price_curvature.size() && (price_curvature.array() < 0).any()) {
    throw Error("cournot: price curvature must be nonnegative (concave price)");
  }
}

CournotParams sample_params(int num_players, int num_locations, Rng& rng) {
  if (num_players < 1 || num_locations < 1) {
    throw Error("cournot: need at least one player and one location");
  }
  CournotParams p;
  p.num_players = num_players;
  p.num_locations = num_locations;
  p.a.resize(num_players, num_locations);
  p.b.resize(num_players, num_locations);
  p.cap = Matrix::Constant(num_players, num_locations, 500.0);
  p.d.resize(num_locations);
  p.price_curvature = Vector::Zero(num_locations);
  std::uniform_real_distribution<double> ua(2.0, 12.0);
  std::uniform_real_distribution<double> ub(2.0, 3.0);
  std::uniform_real_distribution<double> ud(90.0, 100.0);
  for (int i = 0; i < num_players; ++i) {
    for (int l = 0; l < num_locations; ++l) {
      p.a(i, l) = ua(rng);
      p.b(i, l) = ub(rng);
    }
  }
  for (int l = 0; l < num_locations; ++l) p.d[l] = ud(rng);
  return p;
}

namespace {
double curvature(const CournotParams& p, int l) {
  return p.price_curvature.size() ? p.price_curvature[l] : 0.0;
}
}  // namespace

double price(const CournotParams& p, int l, double u) {
  return p.d[l] - u - curvature(p, l) * u * u;
}

double price_slope(const CournotParams& p, int l, double u) {
  return -1.0 - 2.0 * curvature(p, l) * u;
}

Vector gradient(const CournotParams& p, int i, const Vector& xi, const Vector& u) {
  const int L = p.num_locations;
  Vector f(2 * L);
  for (int l = 0; l < L; ++l) {
    const double g = xi[2 * l];
    const double s = xi[2 * l + 1];
    f[2 * l] = p.a(i, l) + 2.0 * p.b(i, l) * g;
    f[2 * l + 1] = -price(p, l, u[l]) - price_slope(p, l, u[l]) * s;
  }
  return f;
}

Vector sales(const Vector& xi) {
  const Eigen::Index L = xi.size() / 2;
  Vector s(L);
  for (Eigen::Index l = 0; l < L; ++l) s[l] = xi[2 * l + 1];
  return s;
}

Vector production(const Vector& xi) {
  const Eigen::Index L = xi.size() / 2;
  Vector g(L);
  for (Eigen::Index l = 0; l < L; ++l) g[l] = xi[2 * l];
  return g;
}

FeasibleSet feasible_set(const CournotParams& p, int i) {
  const int L = p.num_locations;
  Vector lower = Vector::Zero(2 * L);
  Vector upper(2 * L);
  Vector a(2 * L);
  for (int l = 0; l < L; ++l) {
    upper[2 * l] = p.cap(i, l);
    upper[2 * l + 1] = p.cap(i, l);
    a[2 * l] = 1.0;
    a[2 * l + 1] = -1.0;
  }
  return FeasibleSet::coupled(std::move(lower), std::move(upper),
                              LinearCoupling{std::move(a), p.coupling_relation, 0.0});
}

GameInstance build_game(const CournotParams& params) {
  params.validate();
  std::vector<PlayerSpec> players;
  players.reserve(params.num_players);
  for (int i = 0; i < params.num_players; ++i) {
    players.push_back(PlayerSpec{
        feasible_set(params, i),
        [params, i](const Vector& xi, const Vector& u) { return gradient(params, i, xi, u); },
        [](const Vector& xi) { return sales(xi); }});
  }
  return GameInstance(std::move(players), params.num_locations);
}

Vector max_aggregate(const CournotParams& p) { return p.cap.colwise().sum().transpose(); }

double lipschitz_bound_aggregate(const CournotParams& p, int i) {
  const Vector umax = max_aggregate(p);
  double s = 0.0;
  for (int l = 0; l < p.num_locations; ++l) {
    const double c = std::abs(price_slope(p, l, umax[l]));
    const double m = 2.0 * curvature(p, l);
    s += c * c + m * m * p.cap(i, l) * p.cap(i, l);
  }
  return std::sqrt(2.0) * std::sqrt(s);
}

double lipschitz_bound_decision(const CournotParams& p, int i) {
  const Vector umax = max_aggregate(p);
  double s = 0.0;
  for (int l = 0; l < p.num_locations; ++l) {
    const double pbar = std::abs(price_slope(p, l, umax[l]));
    s += 4.0 * p.b(i, l) * p.b(i, l) + pbar * pbar;
  }
  return std::sqrt(s);
}

}  // namespace aggnash::cournot
