#pragma once

#include "aggnash/types.hpp"

#include <optional>
#include <random>

namespace aggnash {

enum class Relation { eq, ge };

/// aᵀz = rhs (eq) or aᵀz ≥ rhs (ge).
struct LinearCoupling {
  Vector a;
  Relation relation = Relation::eq;
  double rhs = 0.0;
};

/// A box, optionally intersected with one linear constraint. Upper bounds
/// may be +inf; algorithm runs additionally require boundedness.
class FeasibleSet {
 public:
  enum class Kind { box, box_with_linear_coupling };

  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet coupled(Vector lower, Vector upper, LinearCoupling coupling);

  Kind kind() const { return coupling_ ? Kind::box_with_linear_coupling : Kind::box; }
  int dim() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  const std::optional<LinearCoupling>& coupling() const { return coupling_; }

  bool bounded() const;
  /// Membership with absolute slack `tol` on every constraint.
  bool contains(const Vector& z, double tol = 1e-9) const;
  /// max ‖x − z‖ over the bounding box (an upper bound on the set diameter).
  double box_diameter() const;
  /// max ‖x‖ over the bounding box.
  double box_max_norm() const;

  /// Euclidean projection onto the set.
  Vector project(const Vector& z) const;

  /// Uniform draw from the bounding box followed by projection onto the set.
  template <class Rng>
  Vector sample(Rng& rng) const {
    Vector z(dim());
    for (int i = 0; i < dim(); ++i) {
      std::uniform_real_distribution<double> u(lower_[i], upper_[i]);
      z[i] = u(rng);
    }
    return project(z);
  }

 private:
  FeasibleSet(Vector lower, Vector upper, std::optional<LinearCoupling> coupling);

  Vector lower_;
  Vector upper_;
  std::optional<LinearCoupling> coupling_;
};

struct ProjectionWorkspace {
  int max_iters = 500;
  double tolerance = 1e-10;
  int last_iterations = 0;
};

Vector project_box(const Vector& z, const Vector& lower, const Vector& upper);

/// Exact projection onto a box intersected with one linear constraint, by
/// bisection on the constraint multiplier ν: for fixed ν the minimizer is
/// clamp(z − ν a) and aᵀclamp(z − ν a) is nonincreasing in ν. Once the
/// bracket is narrow the active set is fixed and ν is solved in closed form.
Vector project_coupled(const Vector& z, const FeasibleSet& set, ProjectionWorkspace& ws);

}  // namespace aggnash
