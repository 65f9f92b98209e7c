#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace errdyn {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Which invariant side a diffusion enters on: X s^ dW (lid) or s^ X dW (rid).
enum class NoiseSide { lid, rid };

// Invariant-error convention: lie = Xhat^-1 X, rie = X Xhat^-1.
enum class ErrorSide { lie, rie };

// How an additive disturbance enters the state equation:
// left_invariant = X w^ (documented default), right_invariant = w^ X.
enum class DisturbanceSide { left_invariant, right_invariant };

// Principal-branch violation of a logarithm-like map. Kept separate from
// SingularityError so callers can tell "outside the chart" from "chart
// derivative not invertible".
class BranchError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// dexp (or a related linearization) is numerically singular, e.g. rotation
// angle at a nonzero multiple of 2*pi.
class SingularityError : public std::runtime_error {
public:
  explicit SingularityError(const std::string& what, double when = 0.0)
      : std::runtime_error(what), time(when) {}
  double time;  // simulation time at which the singularity was hit, if known
};

}  // namespace errdyn
