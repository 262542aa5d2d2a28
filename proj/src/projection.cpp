#include "aggnash/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aggnash {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_bounds(const Vector& lower, const Vector& upper) {
  if (lower.size() != upper.size()) {
    throw Error("box bounds have different lengths");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i]) {
      throw InfeasibleSetError("inconsistent box bounds at coordinate " + std::to_string(i));
    }
  }
}

double coupling_scale(double rhs) { return 1.0 + std::abs(rhs); }

// aᵀ clamp(z − ν a) − rhs
double coupling_gap(const Vector& z, const Vector& a, const Vector& lower, const Vector& upper,
                    double rhs, double nu) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (a[i] == 0.0) continue;
    s += a[i] * std::clamp(z[i] - nu * a[i], lower[i], upper[i]);
  }
  return s - rhs;
}

// Solves the piecewise-linear gap equation exactly on the active set at ν.
double closed_form_multiplier(const Vector& z, const Vector& a, const Vector& lower,
                              const Vector& upper, double rhs, double nu) {
  double num = -rhs;
  double den = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (a[i] == 0.0) continue;
    const double t = z[i] - nu * a[i];
    if (t <= lower[i]) {
      num += a[i] * lower[i];
    } else if (t >= upper[i]) {
      num += a[i] * upper[i];
    } else {
      num += a[i] * z[i];
      den += a[i] * a[i];
    }
  }
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return num / den;
}

}  // namespace

Vector project_box(const Vector& z, const Vector& lower, const Vector& upper) {
  check_bounds(lower, upper);
  if (z.size() != lower.size()) throw Error("project_box: dimension mismatch");
  return z.cwiseMax(lower).cwiseMin(upper);
}

Vector project_coupled(const Vector& z, const FeasibleSet& set, ProjectionWorkspace& ws) {
  if (ws.tolerance <= 0.0) throw Error("projection tolerance must be positive");
  ws.last_iterations = 0;
  const Vector& lower = set.lower();
  const Vector& upper = set.upper();
  if (z.size() != lower.size()) throw Error("project_coupled: dimension mismatch");
  if (!set.coupling()) return project_box(z, lower, upper);

  const LinearCoupling& c = *set.coupling();
  const Vector& a = c.a;
  const double tol = ws.tolerance * coupling_scale(c.rhs);

  // Range of aᵀy over the box decides feasibility.
  double lo_sum = 0.0;
  double hi_sum = 0.0;
  double min_abs_a = kInf;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    min_abs_a = std::min(min_abs_a, std::abs(a[i]));
    lo_sum += a[i] > 0 ? a[i] * lower[i] : a[i] * upper[i];
    hi_sum += a[i] > 0 ? a[i] * upper[i] : a[i] * lower[i];
  }
  if (hi_sum < c.rhs - tol || (c.relation == Relation::eq && lo_sum > c.rhs + tol)) {
    throw InfeasibleSetError("linear coupling cannot be met inside the box");
  }

  Vector y = z.cwiseMax(lower).cwiseMin(upper);
  if (min_abs_a == kInf) return y;  // a = 0: the constraint is 0 = rhs, already checked
  const double gap0 = a.dot(y) - c.rhs;
  if (c.relation == Relation::ge && gap0 >= -tol) return y;
  if (std::abs(gap0) <= tol) return y;

  auto gap = [&](double nu) { return coupling_gap(z, a, lower, upper, c.rhs, nu); };

  // Bracket [lo, hi] with gap(lo) ≥ 0 ≥ gap(hi).
  double width = (z.norm() + std::abs(c.rhs)) / min_abs_a;
  if (!(width > 0.0)) width = 1.0;
  double lo = -width;
  double hi = width;
  for (int grow = 0; gap(lo) < 0.0 || gap(hi) > 0.0; ++grow) {
    if (grow > 200) throw ProjectionError("could not bracket the coupling multiplier", gap0);
    lo *= 2.0;
    hi *= 2.0;
  }

  double best_residual = kInf;
  for (int it = 0; it < ws.max_iters; ++it) {
    ws.last_iterations = it + 1;
    const double mid = 0.5 * (lo + hi);
    const double g = gap(mid);
    if (std::abs(g) < best_residual) {
      best_residual = std::abs(g);
    }

    const double nu = closed_form_multiplier(z, a, lower, upper, c.rhs, mid);
    if (std::isfinite(nu) && nu >= lo && nu <= hi) {
      const double gn = gap(nu);
      if (std::abs(gn) <= tol) {
        return (z - nu * a).cwiseMax(lower).cwiseMin(upper);
      }
    }
    if (std::abs(g) <= tol && hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) {
      return (z - mid * a).cwiseMax(lower).cwiseMin(upper);
    }
    if (g > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) {
      const double gm = gap(0.5 * (lo + hi));
      if (std::abs(gm) <= tol) {
        return (z - 0.5 * (lo + hi) * a).cwiseMax(lower).cwiseMin(upper);
      }
      throw ProjectionError("multiplier bracket collapsed before reaching tolerance",
                            std::abs(gm));
    }
  }
  throw ProjectionError("projection did not converge within max_iters", best_residual);
}

FeasibleSet::FeasibleSet(Vector lower, Vector upper, std::optional<LinearCoupling> coupling)
    : lower_(std::move(lower)), upper_(std::move(upper)), coupling_(std::move(coupling)) {
  check_bounds(lower_, upper_);
  if (coupling_) {
    if (coupling_->a.size() != lower_.size()) {
      throw Error("coupling coefficient vector has the wrong length");
    }
    // Nonemptiness: the projection of an interior reference point must land in the set.
    Vector mid(dim());
    for (int i = 0; i < dim(); ++i) {
      const bool lf = std::isfinite(lower_[i]);
      const bool uf = std::isfinite(upper_[i]);
      mid[i] = lf && uf ? 0.5 * (lower_[i] + upper_[i]) : lf ? lower_[i] : uf ? upper_[i] : 0.0;
    }
    const Vector p = project(mid);
    if (!contains(p, 1e-8 * (1.0 + p.lpNorm<Eigen::Infinity>()))) {
      throw InfeasibleSetError("feasible set is empty");
    }
  }
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  return FeasibleSet(std::move(lower), std::move(upper), std::nullopt);
}

FeasibleSet FeasibleSet::coupled(Vector lower, Vector upper, LinearCoupling coupling) {
  return FeasibleSet(std::move(lower), std::move(upper), std::move(coupling));
}

bool FeasibleSet::bounded() const {
  return lower_.allFinite() && upper_.allFinite();
}

bool FeasibleSet::contains(const Vector& z, double tol) const {
  if (z.size() != lower_.size()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (z[i] < lower_[i] - tol || z[i] > upper_[i] + tol) return false;
  }
  if (coupling_) {
    const double r = coupling_->a.dot(z) - coupling_->rhs;
    const double slack = tol * coupling_scale(coupling_->rhs);
    if (coupling_->relation == Relation::eq ? std::abs(r) > slack : r < -slack) return false;
  }
  return true;
}

double FeasibleSet::box_diameter() const { return (upper_ - lower_).norm(); }

double FeasibleSet::box_max_norm() const {
  return lower_.cwiseAbs().cwiseMax(upper_.cwiseAbs()).norm();
}

Vector FeasibleSet::project(const Vector& z) const {
  if (!coupling_) return project_box(z, lower_, upper_);
  ProjectionWorkspace ws;
  return project_coupled(z, *this, ws);
}

}  // namespace aggnash
