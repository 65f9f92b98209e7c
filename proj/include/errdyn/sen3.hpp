#pragma once

#include "errdyn/model.hpp"

namespace errdyn {

/// SE_N(3) model with N translation columns: n = 3+N, d = 3(1+N).
/// Coordinates are ordered (omega, v_1, ..., v_N). N = 0 gives SO(3).
ModelPtr make_sen3(int N);
ModelPtr make_so3();  // alias for make_sen3(0) named "SO3"

// Degree-4 polynomial coefficients of adm in the closed dexp form, all
// functions of theta = |omega| only. beta_prime are the theta-derivatives;
// psi_j = beta_prime_j / theta stays finite at theta = 0 and is what the
// drift-correction closed form actually consumes. theta_dir is filled by
// the (xi, direction) overload.
struct JacobianCoefficients {
  double theta = 0.0;
  double beta[4] = {0, 0, 0, 0};
  double beta_prime[4] = {0, 0, 0, 0};
  double psi[4] = {0, 0, 0, 0};
  double theta_dir = 0.0;
};

// Power series below theta = 0.9, closed trigonometric form above: the trig
// numerators cancel to O(theta^6) and lose precision long before the series
// stops converging quickly.
JacobianCoefficients sen3_jacobian_coefficients(double theta);
// Additionally fills theta_dir = omega . gamma_omega / theta for the given
// xi and direction gamma (0 when theta = 0).
JacobianCoefficients sen3_jacobian_coefficients(const GroupModel& m,
                                                const Vec& xi,
                                                const Vec& gamma);

Mat sen3_exp(const GroupModel& m, const Vec& v);
// Principal branch only; throws BranchError for rotation angle >= pi - 1e-9.
Vec sen3_log(const GroupModel& m, const Mat& X);

// dexp_m(-xi) assembled as I + sum_j beta_j adm(xi)^j.
Mat sen3_dexp_right(const GroupModel& m, const Vec& xi);

// Frobenius norm of adm^5 + 2 theta^2 adm^3 + theta^4 adm at adm = adm(xi).
double sen3_minimal_polynomial_residual(const GroupModel& m, const Vec& xi);

// Closed-form drift correction, alternating-sign (lid) convention:
// C = sum_{j=1..4} [ psi_j * (omega . gamma_omega) * adm^j gamma
//                    + beta_j * (sum_r adm^r adm_gamma adm^{j-1-r}) gamma ].
Vec sen3_c_correction(const GroupModel& m, const Vec& xi, const Vec& gamma);

// wrapper-level conveniences
GroupElement sen3_exp(const AlgebraVector& v);
AlgebraVector sen3_log(const GroupElement& X);
Mat sen3_dexp_right(const AlgebraVector& xi);
double sen3_minimal_polynomial_residual(const AlgebraVector& xi);
AlgebraVector sen3_c_correction(const AlgebraVector& xi,
                                const AlgebraVector& gamma);

}  // namespace errdyn
