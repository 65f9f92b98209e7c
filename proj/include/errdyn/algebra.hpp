#pragma once

#include "errdyn/model.hpp"

namespace errdyn {

// ---- raw kernels (hot paths; no wrapper construction) ----

Mat hat(const GroupModel& m, const Vec& v);
// Throws std::invalid_argument if mat is off span(basis) by more than tol.
Vec vee(const GroupModel& m, const Mat& mat, double tol = 1e-9);
void adm_into(const GroupModel& m, const Vec& v, Mat& out);
Mat exp_m(const GroupModel& m, const Vec& v);
Vec log_m(const GroupModel& m, const Mat& X);
Mat Ad(const GroupModel& m, const Mat& X);

// Truncated series sum_{i=0}^{order} adm(v)^i/(i+1)!. order <= 0 means the
// model default. Terms are added until `order` or until they fall below
// 1e-16 of the running sum (only after the factorial decay has set in).
Mat dexp_m(const GroupModel& m, const Vec& v, int order = 0);

// Exact inverse of dexp_m(v) at the requested argument. Throws
// SingularityError when the reciprocal condition number drops below 1e-12.
Mat dexp_m_inv(const GroupModel& m, const Vec& v);

// Directional derivative of x -> adm(x)^n in direction g:
// sum_{r=0}^{n-1} adm(x)^r adm(g) adm(x)^{n-1-r}.
Mat dadmn(const GroupModel& m, const Vec& x, const Vec& g, int n);

// Drift-correction series C(x, gamma) = sum_{i>=1} s_i/(i+1)! *
// [sum_{r} adm_x^r adm_gamma adm_x^{i-1-r}] gamma, with s_i = (-1)^i for
// side lid and +1 for side rid. Evaluated by a matrix-vector recurrence;
// equals sum_i s_i/(i+1)! * dadmn(x, gamma, i) * gamma.
Vec c_correction_series(const GroupModel& m, const Vec& x, const Vec& gamma,
                        NoiseSide side, int order = 0);

// BCH truncation z(a, b) with terms up to the requested commutator order
// (1..4): a + b + [a,b]/2 + ([a,[a,b]] + [b,[b,a]])/12 - [b,[a,[a,b]]]/24.
Vec bch_truncated(const GroupModel& m, const Vec& a, const Vec& b, int order);

// Closed form when the model provides one, series otherwise. These keep the
// series-only dexp_m/c_correction_series contracts intact for oracle use.
Mat dexp_neg_fast(const GroupModel& m, const Vec& v);
Mat dexp_neg_inv_fast(const GroupModel& m, const Vec& v);  // inverse of dexp_m(-v)
Vec c_correction_fast(const GroupModel& m, const Vec& x, const Vec& gamma,
                      NoiseSide side);

// ---- wrapper-level API ----

Mat hat(const AlgebraVector& v);
AlgebraVector vee(const ModelPtr& m, const Mat& mat, double tol = 1e-9);
GroupElement exp_m(const AlgebraVector& v);
AlgebraVector log_m(const GroupElement& X);
Mat Ad(const GroupElement& X);
AdmMatrix adm(const AlgebraVector& v);
Mat dexp_m(const AlgebraVector& v, int order = 0);
Mat dexp_m_inv(const AlgebraVector& v);
Mat dadmn(const AlgebraVector& x, const AlgebraVector& g, int n);
AlgebraVector c_correction_series(const AlgebraVector& x,
                                  const AlgebraVector& gamma, NoiseSide side,
                                  int order = 0);
AlgebraVector bch_truncated(const AlgebraVector& a, const AlgebraVector& b,
                            int order);

}  // namespace errdyn
