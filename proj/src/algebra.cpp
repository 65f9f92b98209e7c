#include "errdyn/algebra.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace errdyn {

namespace {

Vec vectorize(const Mat& m) {
  return Eigen::Map<const Vec>(m.data(), m.size());
}

// Series sum of adm powers over (i+1)!. Stops at `order` terms, or earlier
// once terms drop below 1e-16 of the sum; the early stop is only allowed
// past the growth hump of the power series (i >= |A|).
Mat dexp_series(const Mat& A, int order) {
  const int d = static_cast<int>(A.rows());
  Mat sum = Mat::Identity(d, d);
  Mat term = Mat::Identity(d, d);
  const double hump = A.norm();
  for (int i = 1; i <= order; ++i) {
    term = (term * A) / static_cast<double>(i + 1);
    sum += term;
    if (i >= hump && term.norm() < 1e-16 * sum.norm()) break;
  }
  return sum;
}

// enough terms for full double accuracy at any argument the tests use
int adaptive_order(const Mat& A) {
  return std::max(30, static_cast<int>(std::ceil(3.0 * A.norm())) + 20);
}

}  // namespace

Mat hat(const GroupModel& m, const Vec& v) {
  if (v.size() != m.d) throw std::invalid_argument("hat: length != d");
  Mat out = Mat::Zero(m.n, m.n);
  for (int i = 0; i < m.d; ++i) out += v[i] * m.basis[i];
  return out;
}

Vec vee(const GroupModel& m, const Mat& mat, double tol) {
  if (mat.rows() != m.n || mat.cols() != m.n)
    throw std::invalid_argument("vee: matrix is not n x n");
  Vec c = m.vee_projector() * vectorize(mat);
  Mat rec = Mat::Zero(m.n, m.n);
  for (int i = 0; i < m.d; ++i) rec += c[i] * m.basis[i];
  double scale = std::max(1.0, mat.norm());
  if ((mat - rec).norm() > tol * scale)
    throw std::invalid_argument("vee: matrix is off span(basis)");
  return c;
}

void adm_into(const GroupModel& m, const Vec& v, Mat& out) {
  out.setZero();
  for (int i = 0; i < m.d; ++i) out.noalias() += v[i] * m.adm_slice(i);
}

Mat exp_m(const GroupModel& m, const Vec& v) {
  if (m.closed_form.exp && m.hooks.exp) return m.hooks.exp(m, v);
  return hat(m, v).exp();
}

Vec log_m(const GroupModel& m, const Mat& X) {
  if (m.closed_form.log && m.hooks.log) return m.hooks.log(m, X);
  Mat L = X.log();
  if (!L.allFinite())
    throw BranchError("log_m: outside the principal branch");
  return vee(m, L, 1e-6);
}

Mat Ad(const GroupModel& m, const Mat& X) {
  Mat Xinv = X.partialPivLu().inverse();
  Mat out(m.d, m.d);
  for (int j = 0; j < m.d; ++j)
    out.col(j) = vee(m, X * m.basis[j] * Xinv, 1e-6);
  return out;
}

Mat dexp_m(const GroupModel& m, const Vec& v, int order) {
  if (order < 0) throw std::invalid_argument("dexp_m: negative order");
  Mat A(m.d, m.d);
  adm_into(m, v, A);
  return dexp_series(A, order > 0 ? order : m.series_truncation);
}

Mat dexp_m_inv(const GroupModel& m, const Vec& v) {
  Mat A(m.d, m.d);
  adm_into(m, v, A);
  Mat D = dexp_series(A, adaptive_order(A));
  Eigen::PartialPivLU<Mat> lu(D);
  if (lu.rcond() < 1e-12)
    throw SingularityError("dexp_m_inv: dexp_m is numerically singular");
  return lu.inverse();
}

Mat dadmn(const GroupModel& m, const Vec& x, const Vec& g, int n) {
  if (n < 1) throw std::invalid_argument("dadmn: n must be >= 1");
  Mat A(m.d, m.d), G(m.d, m.d);
  adm_into(m, x, A);
  adm_into(m, g, G);
  std::vector<Mat> pow(n);
  pow[0] = Mat::Identity(m.d, m.d);
  for (int r = 1; r < n; ++r) pow[r] = pow[r - 1] * A;
  Mat out = Mat::Zero(m.d, m.d);
  for (int r = 0; r < n; ++r) out.noalias() += pow[r] * G * pow[n - 1 - r];
  return out;
}

Vec c_correction_series(const GroupModel& m, const Vec& x, const Vec& gamma,
                        NoiseSide side, int order) {
  if (order <= 0) order = 20;
  Mat A(m.d, m.d), G(m.d, m.d);
  adm_into(m, x, A);
  adm_into(m, gamma, G);
  // T_i = [sum_r A^r G A^{i-1-r}] gamma via T_{i+1} = A T_i + G A^i gamma
  Vec q = gamma;            // A^{i-1} gamma while processing term i
  Vec T = G * gamma;        // T_1
  Vec C = Vec::Zero(m.d);
  double fact = 2.0;        // (i+1)! running value
  double sign = (side == NoiseSide::lid) ? -1.0 : 1.0;
  double s = sign;
  int tiny_run = 0;  // individual terms can vanish exactly mid-series
  for (int i = 1; i <= order; ++i) {
    C.noalias() += (s / fact) * T;
    if (T.norm() / fact < 1e-15 * std::max(1e-300, C.norm()))
      ++tiny_run;
    else
      tiny_run = 0;
    if (i >= 4 && tiny_run >= 3) break;
    q = A * q;              // now A^i gamma
    T = A * T + G * q;      // T_{i+1}
    fact *= static_cast<double>(i + 2);
    s *= sign;
  }
  return C;
}

Vec bch_truncated(const GroupModel& m, const Vec& a, const Vec& b, int order) {
  if (order < 1 || order > 4)
    throw std::invalid_argument("bch_truncated: order must be in 1..4");
  Mat Aa(m.d, m.d), Ab(m.d, m.d);
  adm_into(m, a, Aa);
  adm_into(m, b, Ab);
  Vec z = a + b;
  if (order >= 2) z += 0.5 * (Aa * b);
  if (order >= 3) z += (Aa * (Aa * b) + Ab * (Ab * a)) / 12.0;
  if (order >= 4) z -= (Ab * (Aa * (Aa * b))) / 24.0;
  return z;
}

Mat dexp_neg_fast(const GroupModel& m, const Vec& v) {
  if (m.closed_form.dexp && m.hooks.dexp_neg) return m.hooks.dexp_neg(m, v);
  Mat A(m.d, m.d);
  adm_into(m, v, A);
  A = -A;
  return dexp_series(A, adaptive_order(A));
}

Mat dexp_neg_inv_fast(const GroupModel& m, const Vec& v) {
  Eigen::PartialPivLU<Mat> lu(dexp_neg_fast(m, v));
  if (lu.rcond() < 1e-12)
    throw SingularityError("dexp_m(-x) is numerically singular");
  return lu.inverse();
}

Vec c_correction_fast(const GroupModel& m, const Vec& x, const Vec& gamma,
                      NoiseSide side) {
  if (m.closed_form.c_correction && m.hooks.c_lid) {
    if (side == NoiseSide::lid) return m.hooks.c_lid(m, x, gamma);
    return -m.hooks.c_lid(m, Vec(-x), gamma);
  }
  return c_correction_series(m, x, gamma, side, 0);
}

// ---- wrapper-level ----

Mat hat(const AlgebraVector& v) { return hat(*v.model, v.coords); }

AlgebraVector vee(const ModelPtr& m, const Mat& mat, double tol) {
  return AlgebraVector(m, vee(*m, mat, tol));
}

GroupElement exp_m(const AlgebraVector& v) {
  return GroupElement(v.model, exp_m(*v.model, v.coords));
}

AlgebraVector log_m(const GroupElement& X) {
  return AlgebraVector(X.model, log_m(*X.model, X.mat));
}

Mat Ad(const GroupElement& X) { return Ad(*X.model, X.mat); }

AdmMatrix adm(const AlgebraVector& v) {
  Mat out(v.model->d, v.model->d);
  adm_into(*v.model, v.coords, out);
  return AdmMatrix{v.model, std::move(out)};
}

Mat dexp_m(const AlgebraVector& v, int order) {
  return dexp_m(*v.model, v.coords, order);
}

Mat dexp_m_inv(const AlgebraVector& v) {
  return dexp_m_inv(*v.model, v.coords);
}

Mat dadmn(const AlgebraVector& x, const AlgebraVector& g, int n) {
  return dadmn(*x.model, x.coords, g.coords, n);
}

AlgebraVector c_correction_series(const AlgebraVector& x,
                                  const AlgebraVector& gamma, NoiseSide side,
                                  int order) {
  return AlgebraVector(
      x.model, c_correction_series(*x.model, x.coords, gamma.coords, side, order));
}

AlgebraVector bch_truncated(const AlgebraVector& a, const AlgebraVector& b,
                            int order) {
  return AlgebraVector(a.model,
                       bch_truncated(*a.model, a.coords, b.coords, order));
}

}  // namespace errdyn
