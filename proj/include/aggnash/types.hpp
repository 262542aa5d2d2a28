#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace aggnash {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One block per player, in player order. The stacked decision vector of the
/// game is the concatenation of these blocks.
using Profile = std::vector<Vector>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  DimensionError(int player, const std::string& what)
      : Error("player " + std::to_string(player) + ": " + what), player_(player) {}
  int player() const { return player_; }

 private:
  int player_;
};

class InfeasibleSetError : public Error {
 public:
  using Error::Error;
};

class ProjectionError : public Error {
 public:
  ProjectionError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A stated precondition of an algorithm or bound does not hold.
class AssumptionError : public Error {
 public:
  using Error::Error;
};

Vector flatten(const Profile& p);
Profile unflatten(const Vector& stacked, const std::vector<int>& dims);

}  // namespace aggnash
