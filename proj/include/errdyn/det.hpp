#pragma once

#include <optional>

#include "errdyn/systems.hpp"

namespace errdyn {

/// Smooth disturbance entering the state equation on the declared side.
/// left_invariant (X w^) is the documented default convention.
struct DisturbanceSignal {
  ControlSignal w;
  DisturbanceSide side = DisturbanceSide::left_invariant;
};

enum class OdeMethod { lie_euler, rkmk4 };

struct Trajectory {
  std::vector<double> times;
  std::vector<Mat> states;
  std::string integrator;
  double dt = 0.0;

  const Mat& at(int k) const { return states[static_cast<size_t>(k)]; }
  int steps() const { return static_cast<int>(times.size()) - 1; }
};

struct ErrorTrajectory {
  std::vector<double> times;
  std::vector<Vec> xi;
  std::vector<Mat> eta;  // empty when only the algebra route ran
  ErrorSide side = ErrorSide::lie;
  // set when a dexp (or log-branch) singularity aborted the integration;
  // times/xi then end at the last valid node
  std::optional<double> singular_time;
};

// Geometric one-step integrators. Both advance through the exponential
// chart, so group membership is preserved by construction. For
// piecewise-constant u the input is sampled once per step at the midpoint,
// which keeps RKMK4 at full order when switches align with the grid.
Trajectory integrate_group_ode(const VectorFieldSpec& f, const Mat& X0,
                               double t0, double T, double dt, OdeMethod method);

// Xhat^-1 X (lie) or X Xhat^-1 (rie).
Mat invariant_error(const Mat& X, const Mat& Xhat, ErrorSide side);
GroupElement invariant_error(const GroupElement& X, const GroupElement& Xhat,
                             ErrorSide side);

// Geodesic interpolation between trajectory nodes:
// X(t) = X_k exp(s log(X_k^-1 X_{k+1})).
Mat interpolate_geodesic(const GroupModel& m, const Trajectory& traj, double t);

// The invariant-error field over eta for an affine f and the given
// disturbance convention:
//   lie, left  disturbance: f(eta) - f(I) eta + eta w^
//   rie, left  disturbance: f(eta) - eta f(I) + eta (Ad_Xhat w)^
//   lie, right disturbance: f(eta) - f(I) eta + (Ad_{Xhat^-1} w)^ eta
//   rie, right disturbance: f(eta) - eta f(I) + w^ eta
VectorFieldSpec error_field(const VectorFieldSpec& f, ErrorSide side,
                            const DisturbanceSignal& w,
                            std::function<Mat(double)> xhat);

// RK4 on the transformed error in the algebra:
//   lie: dxi = A_t xi + dexp_m^-1(-xi) w_eff
//   rie: dxi = A_t xi + dexp_m^-1(-xi) Ad_Xhat w_eff
// (right-side disturbances flip the dexp argument sign and the Ad factor).
// A_t is the linearization of error_linear_part(f, side) at the identity.
ErrorTrajectory integrate_error_ode_algebra(const VectorFieldSpec& f,
                                            ErrorSide side,
                                            const DisturbanceSignal& w,
                                            const Trajectory& xhat,
                                            const Vec& xi0, double dt);

// RKMK4 on the group-valued error field; xi entries are log_m(eta).
ErrorTrajectory integrate_error_ode_group(const VectorFieldSpec& f,
                                          ErrorSide side,
                                          const DisturbanceSignal& w,
                                          const Trajectory& xhat,
                                          const Vec& xi0, double dt);

}  // namespace errdyn
