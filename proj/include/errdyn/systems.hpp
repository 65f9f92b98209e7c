#pragma once

#include <functional>

#include "errdyn/algebra.hpp"

namespace errdyn {

/// Time-indexed input signal u : t -> R^k. Piecewise-constant signals carry
/// their breakpoints so integrators can freeze the value across a step.
struct ControlSignal {
  std::function<Vec(double)> eval;
  std::vector<double> breakpoints;  // empty for smooth or constant signals
  bool piecewise_constant = false;
  bool identically_zero = false;

  static ControlSignal none();  // zero-length vector at every t
  static ControlSignal constant(Vec u);
  // value i holds on [times[i], times[i+1]); the last value extends to +inf
  static ControlSignal piecewise(std::vector<double> times,
                                 std::vector<Vec> values);
  static ControlSignal sinusoid(Vec amplitude, double frequency,
                                double phase = 0.0);
};

enum class FieldKind { left_invariant, right_invariant, commutator, custom };
enum class Classification { linear, affine, neither, unknown };

/// A group vector field X -> f_{u_t}(X). Built-in kinds:
///   left_invariant  f(X) = X u^
///   right_invariant f(X) = u^ X
///   commutator      f(X) = [u^, X]
/// Custom fields evaluate a callable (t, u_t, X).
struct VectorFieldSpec {
  ModelPtr model;
  FieldKind kind = FieldKind::custom;
  ControlSignal u;
  std::function<Mat(double, const Vec&, const Mat&)> custom;
  Classification classification = Classification::unknown;
  // false for Ito-corrected drifts, whose value leaves the tangent space
  bool tangent = true;

  Mat eval(double t, const Mat& X) const;
  Mat eval_with_u(const Vec& ut, double t, const Mat& X) const;

  static VectorFieldSpec left_invariant(ModelPtr m, ControlSignal u);
  static VectorFieldSpec right_invariant(ModelPtr m, ControlSignal u);
  static VectorFieldSpec commutator(ModelPtr m, ControlSignal u);
  static VectorFieldSpec zero(ModelPtr m);
  static VectorFieldSpec custom_field(
      ModelPtr m, std::function<Mat(double, const Vec&, const Mat&)> fn,
      ControlSignal u = ControlSignal::none(),
      Classification classification = Classification::unknown);
};

struct ClassifyReport {
  bool holds = false;
  double max_residual = 0.0;
};

// Sampled test of f(XY) = f(X)Y + Xf(Y) over random pairs X = exp(g),
// g ~ N(0, 0.5^2 I). Residuals are relative to max(1, |f(XY)|).
ClassifyReport check_linear(const VectorFieldSpec& f, int samples = 64,
                            double tol = 1e-9, double t = 0.0,
                            uint64_t seed = 12345);
// Same draw scheme for f(XY) = f(X)Y + Xf(Y) - Xf(I)Y.
ClassifyReport check_affine(const VectorFieldSpec& f, int samples = 64,
                            double tol = 1e-9, double t = 0.0,
                            uint64_t seed = 12345);

// h(X) = f(X) - X f(I). Built-in kinds reduce analytically
// (left_invariant -> zero, right_invariant -> commutator); custom fields are
// wrapped and spot-checked for the affine property first.
VectorFieldSpec affine_to_linear(const VectorFieldSpec& f);

// Linear part of the invariant-error dynamics for the given error side:
// lie uses f(X) - f(I)X, rie uses f(X) - X f(I).
VectorFieldSpec error_linear_part(const VectorFieldSpec& f, ErrorSide side);

enum class CombineRule { linear_linear, affine_affine, linear_affine };

// Sum of two fields with the classification the closure rules dictate.
// Throws if the operand classifications do not match the rule.
VectorFieldSpec combine(const VectorFieldSpec& f, const VectorFieldSpec& g,
                        CombineRule rule);

// Differential of x -> (exp_m(x)^-1 f(exp_m(x)))^vee at x = 0. Analytic for
// built-in kinds (commutator gives adm(u)); central differences with
// h = 1e-6 otherwise.
Mat linearize_at_identity(const VectorFieldSpec& f, double t);

// Max residual of adm(Ax)y + adm(x)(Ay) - A adm(x)y over random x, y.
double check_lemma1(const ModelPtr& m, const Mat& A, int samples = 64,
                    uint64_t seed = 12345);

/// Time-indexed linearization A_t with its transition map.
struct LinearizedSystem {
  ModelPtr model;
  std::function<Mat(double)> A;
  static LinearizedSystem from_field(const VectorFieldSpec& f);
};

// RK4 integration of dPhi/dt = A(t) Phi from the identity.
Mat transition_map(const LinearizedSystem& sys, double t0, double t1,
                   double dt);

}  // namespace errdyn
