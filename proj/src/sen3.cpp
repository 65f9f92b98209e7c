#include "errdyn/sen3.hpp"

#include <cmath>

#include "errdyn/algebra.hpp"

namespace errdyn {

namespace {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

Mat3 hat3(const Vec3& w) {
  Mat3 m;
  m << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return m;
}

Vec3 vee3(const Mat3& m) { return Vec3(m(2, 1), m(0, 2), m(1, 0)); }

// sin(t)/t, (1-cos t)/t^2, (t - sin t)/t^3 with small-angle guards
void rot_coeffs(double t, double& a, double& b, double& c) {
  const double t2 = t * t;
  if (t < 1e-4) {
    a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    c = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  } else {
    a = std::sin(t) / t;
    b = (1.0 - std::cos(t)) / t2;
    c = (t - std::sin(t)) / (t2 * t);
  }
}

Mat3 rodrigues(const Vec3& w) {
  double a, b, c;
  rot_coeffs(w.norm(), a, b, c);
  Mat3 W = hat3(w);
  return Mat3::Identity() + a * W + b * (W * W);
}

Mat3 left_jacobian(const Vec3& w) {
  double a, b, c;
  rot_coeffs(w.norm(), a, b, c);
  Mat3 W = hat3(w);
  return Mat3::Identity() + b * W + c * (W * W);
}

Mat3 left_jacobian_inv(const Vec3& w) {
  const double t = w.norm();
  double e;
  if (t < 1e-4) {
    const double t2 = t * t;
    e = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  } else {
    // 1/t^2 - (1+cos t)/(2 t sin t), written via cot(t/2) so the numerator
    // stays accurate all the way to t = pi
    e = 1.0 / (t * t) - std::cos(0.5 * t) / (2.0 * t * std::sin(0.5 * t));
  }
  Mat3 W = hat3(w);
  return Mat3::Identity() - 0.5 * W + e * (W * W);
}

Vec3 so3_log(const Mat3& R) {
  double ctheta = 0.5 * (R.trace() - 1.0);
  ctheta = std::min(1.0, std::max(-1.0, ctheta));
  const double theta = std::acos(ctheta);
  if (theta >= M_PI - 1e-9)
    throw BranchError("sen3_log: rotation angle at the branch cut (pi)");
  const Vec3 b = vee3(Mat3((R - R.transpose()) * 0.5));  // = sin(theta) * axis
  if (theta < 3.0) {
    double s;  // theta / (2 sin theta)
    if (theta < 1e-4) {
      const double t2 = theta * theta;
      s = 0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0);
    } else {
      s = 0.5 * theta / std::sin(theta);
    }
    return 2.0 * s * b;
  }
  // near pi the antisymmetric part degrades; recover the axis from the
  // diagonal and complete the off-diagonal entries against its largest entry
  const double vc = 1.0 - ctheta;
  Vec3 u;
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (R(i, i) > R(k, k)) k = i;
  u[k] = std::sqrt(std::max(0.0, (R(k, k) - ctheta) / vc));
  if (u[k] < 1e-12) u[k] = 1e-12;
  for (int i = 0; i < 3; ++i)
    if (i != k) u[i] = (R(i, k) + R(k, i)) / (2.0 * u[k] * vc);
  if (b[k] < 0.0) u = -u;  // align with the antisymmetric part's sign
  u.normalize();
  return theta * u;
}

Vec sen3_c_correction_impl(const GroupModel& m, const Vec& xi, const Vec& gamma);

Mat hook_exp(const GroupModel& m, const Vec& v) { return sen3_exp(m, v); }
Vec hook_log(const GroupModel& m, const Mat& X) { return sen3_log(m, X); }
Mat hook_dexp_neg(const GroupModel& m, const Vec& v) {
  return sen3_dexp_right(m, v);
}
Vec hook_c(const GroupModel& m, const Vec& x, const Vec& g) {
  return sen3_c_correction_impl(m, x, g);
}

}  // namespace

ModelPtr make_sen3(int N) {
  if (N < 0) throw std::invalid_argument("make_sen3: N must be >= 0");
  const int n = 3 + N;
  const int d = 3 * (1 + N);
  std::vector<Mat> basis;
  basis.reserve(d);
  for (int k = 0; k < 3; ++k) {
    Mat E = Mat::Zero(n, n);
    Vec3 ek = Vec3::Zero();
    ek[k] = 1.0;
    E.topLeftCorner(3, 3) = hat3(ek);
    basis.push_back(E);
  }
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < 3; ++k) {
      Mat E = Mat::Zero(n, n);
      E(k, 3 + i) = 1.0;
      basis.push_back(E);
    }
  auto m = std::make_shared<GroupModel>(
      N == 0 ? std::string("SO3") : "SE" + std::to_string(N) + "3", n, d,
      std::move(basis));
  m->sen3_N = N;
  m->closed_form = {true, true, true, true};
  m->hooks.exp = hook_exp;
  m->hooks.log = hook_log;
  m->hooks.dexp_neg = hook_dexp_neg;
  m->hooks.c_lid = hook_c;
  return m;
}

ModelPtr make_so3() { return make_sen3(0); }

JacobianCoefficients sen3_jacobian_coefficients(double theta) {
  JacobianCoefficients jc;
  jc.theta = theta;
  const double t = theta, t2 = t * t;
  if (t < 0.9) {
    // power series in t^2. The trig forms below cancel to O(t^6) numerators,
    // so as scalar coefficients they lose up to ten digits for t under ~0.5;
    // twelve series terms reach full precision everywhere under the seam.
    double fact[30];
    fact[0] = 1.0;
    for (int i = 1; i <= 29; ++i) fact[i] = fact[i - 1] * i;
    double b1 = 0, b2 = 0, b3 = 0, b4 = 0, p3 = 0, p4 = 0;
    double p = 1.0;  // t^{2r}
    for (int r = 0; r <= 11; ++r, p *= t2) {
      const int ka = r + 1, kb = r + 2, kc = r + 3;
      const double sa = ka % 2 ? -1.0 : 1.0;
      const double sb = kb % 2 ? -1.0 : 1.0;
      const double sc = kc % 2 ? -1.0 : 1.0;
      b1 += 0.5 * sa * (4.0 / fact[2 * ka] - 1.0 / fact[2 * ka - 1]) * p;
      b2 += 0.5 * sa * (1.0 / fact[2 * ka] - 5.0 / fact[2 * ka + 1]) * p;
      b3 += 0.5 * sb * (2.0 / fact[2 * kb] - 1.0 / fact[2 * kb - 1]) * p;
      b4 += 0.5 * sb * (1.0 / fact[2 * kb] - 3.0 / fact[2 * kb + 1]) * p;
      p3 -= 0.5 * sc *
            (8.0 / fact[2 * kc] + 1.0 / fact[2 * kc - 2] -
             5.0 / fact[2 * kc - 1]) *
            p;
      p4 += 0.5 * sc *
            (15.0 / fact[2 * kc + 1] - 7.0 / fact[2 * kc] +
             1.0 / fact[2 * kc - 1]) *
            p;
    }
    jc.beta[0] = b1;
    jc.beta[1] = b2;
    jc.beta[2] = b3;
    jc.beta[3] = b4;
    jc.psi[0] = t2 * p3;
    jc.psi[1] = t2 * p4;
    jc.psi[2] = p3;
    jc.psi[3] = p4;
  } else {
    const double s = std::sin(t), c = std::cos(t);
    const double t3 = t2 * t, t4 = t2 * t2, t5 = t4 * t;
    jc.beta[0] = (4.0 * c - 4.0 + t * s) / (2.0 * t2);
    jc.beta[1] = (4.0 * t - 5.0 * s + t * c) / (2.0 * t3);
    jc.beta[2] = (t * s + 2.0 * c - 2.0) / (2.0 * t4);
    jc.beta[3] = (2.0 * t - 3.0 * s + t * c) / (2.0 * t5);
    // shared numerators: psi_1 = theta^2 psi_3, psi_2 = theta^2 psi_4
    const double n13 = 8.0 - 8.0 * c + t2 * c - 5.0 * t * s;
    const double n24 = 15.0 * s - 8.0 * t - 7.0 * t * c - t2 * s;
    jc.psi[0] = n13 / (2.0 * t4);
    jc.psi[1] = n24 / (2.0 * t5);
    jc.psi[2] = n13 / (2.0 * t4 * t2);
    jc.psi[3] = n24 / (2.0 * t5 * t2);
  }
  for (int j = 0; j < 4; ++j) jc.beta_prime[j] = jc.psi[j] * t;
  return jc;
}

JacobianCoefficients sen3_jacobian_coefficients(const GroupModel& m,
                                                const Vec& xi,
                                                const Vec& gamma) {
  const Vec3 w = xi.head<3>();
  const double theta = w.norm();
  JacobianCoefficients jc = sen3_jacobian_coefficients(theta);
  jc.theta_dir = theta > 0.0 ? w.dot(gamma.head<3>()) / theta : 0.0;
  (void)m;
  return jc;
}

Mat sen3_exp(const GroupModel& m, const Vec& v) {
  const int N = m.sen3_N;
  const Vec3 w = v.head<3>();
  Mat X = Mat::Identity(m.n, m.n);
  X.topLeftCorner(3, 3) = rodrigues(w);
  if (N > 0) {
    const Mat3 J = left_jacobian(w);
    for (int i = 0; i < N; ++i)
      X.block<3, 1>(0, 3 + i) = J * v.segment<3>(3 + 3 * i);
  }
  return X;
}

Vec sen3_log(const GroupModel& m, const Mat& X) {
  const int N = m.sen3_N;
  Vec v(m.d);
  const Vec3 w = so3_log(X.topLeftCorner<3, 3>());
  v.head<3>() = w;
  if (N > 0) {
    const Mat3 Jinv = left_jacobian_inv(w);
    for (int i = 0; i < N; ++i)
      v.segment<3>(3 + 3 * i) = Jinv * X.block<3, 1>(0, 3 + i);
  }
  return v;
}

Mat sen3_dexp_right(const GroupModel& m, const Vec& xi) {
  const JacobianCoefficients jc = sen3_jacobian_coefficients(xi.head<3>().norm());
  Mat A(m.d, m.d);
  adm_into(m, xi, A);
  // Horner on the degree-4 polynomial in adm
  Mat P = jc.beta[2] * Mat::Identity(m.d, m.d) + jc.beta[3] * A;
  P = jc.beta[1] * Mat::Identity(m.d, m.d) + A * P;
  P = jc.beta[0] * Mat::Identity(m.d, m.d) + A * P;
  return Mat::Identity(m.d, m.d) + A * P;
}

double sen3_minimal_polynomial_residual(const GroupModel& m, const Vec& xi) {
  const double t2 = xi.head<3>().squaredNorm();
  Mat A(m.d, m.d);
  adm_into(m, xi, A);
  Mat A2 = A * A;
  Mat A3 = A2 * A;
  return (A3 * A2 + 2.0 * t2 * A3 + t2 * t2 * A).norm();
}

namespace {

Vec sen3_c_correction_impl(const GroupModel& m, const Vec& xi, const Vec& gamma) {
  const JacobianCoefficients jc = sen3_jacobian_coefficients(m, xi, gamma);
  Mat A(m.d, m.d), G(m.d, m.d);
  adm_into(m, xi, A);
  adm_into(m, gamma, G);
  Vec q = gamma;       // adm^j gamma
  Vec T = G * gamma;   // nested-derivative sum applied to gamma, j terms
  Vec C = Vec::Zero(m.d);
  const double dot = jc.theta_dir * jc.theta;  // omega . gamma_omega
  for (int j = 1; j <= 4; ++j) {
    q = A * q;
    C.noalias() += (jc.psi[j - 1] * dot) * q + jc.beta[j - 1] * T;
    if (j < 4) T = A * T + G * q;
  }
  return C;
}

}  // namespace

Vec sen3_c_correction(const GroupModel& m, const Vec& xi, const Vec& gamma) {
  return sen3_c_correction_impl(m, xi, gamma);
}

// ---- wrappers ----

GroupElement sen3_exp(const AlgebraVector& v) {
  return GroupElement(v.model, sen3_exp(*v.model, v.coords));
}

AlgebraVector sen3_log(const GroupElement& X) {
  return AlgebraVector(X.model, sen3_log(*X.model, X.mat));
}

Mat sen3_dexp_right(const AlgebraVector& xi) {
  return sen3_dexp_right(*xi.model, xi.coords);
}

double sen3_minimal_polynomial_residual(const AlgebraVector& xi) {
  return sen3_minimal_polynomial_residual(*xi.model, xi.coords);
}

AlgebraVector sen3_c_correction(const AlgebraVector& xi,
                                const AlgebraVector& gamma) {
  return AlgebraVector(xi.model,
                       sen3_c_correction(*xi.model, xi.coords, gamma.coords));
}

}  // namespace errdyn
