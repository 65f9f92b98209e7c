#include <random>

#include "doctest.h"
#include "errdyn/algebra.hpp"
#include "errdyn/sen3.hpp"

using namespace errdyn;

namespace {

Vec rand_vec(std::mt19937_64& rng, int d, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = n(rng);
  return v;
}

// reference exponential: plain series with scaling and squaring
Mat exp_reference(const Mat& A) {
  int k = 0;
  double norm = A.norm();
  while (norm > 0.25) {
    norm /= 2;
    ++k;
  }
  Mat B = A / double(1 << k);
  Mat out = Mat::Identity(A.rows(), A.cols());
  Mat term = out;
  for (int i = 1; i <= 24; ++i) {
    term = term * B / double(i);
    out += term;
  }
  for (int i = 0; i < k; ++i) out = out * out;
  return out;
}

}  // namespace

TEST_SUITE("sen3") {

TEST_CASE("family dimensions") {
  for (int N : {0, 1, 2, 3, 4}) {
    ModelPtr m = make_sen3(N);
    CHECK(m->n == 3 + N);
    CHECK(m->d == 3 * (1 + N));
    CHECK(m->sen3_N == N);
    CHECK(int(m->basis.size()) == m->d);
  }
  CHECK(make_so3()->n == 3);
  CHECK(make_so3()->d == 3);
  CHECK_THROWS_AS(make_sen3(-1), std::invalid_argument);
}

TEST_CASE("closed-form exp matches the series") {
  std::mt19937_64 rng(101);
  for (int N : {0, 1, 2}) {
    ModelPtr m = make_sen3(N);
    for (int rep = 0; rep < 15; ++rep) {
      Vec v = rand_vec(rng, m->d, 1.0);
      CHECK((sen3_exp(*m, v) - exp_reference(hat(*m, v))).norm() < 1e-13);
    }
    // pure translation, zero rotation block
    Vec t = Vec::Zero(m->d);
    if (N > 0) {
      t[3] = 0.7;
      Mat X = sen3_exp(*m, t);
      CHECK((X.topLeftCorner(3, 3) - Mat::Identity(3, 3)).norm() == 0.0);
      CHECK(X(0, 3) == doctest::Approx(0.7));
    }
  }
}

TEST_CASE("group structure is preserved") {
  std::mt19937_64 rng(103);
  ModelPtr m = make_sen3(2);
  Mat X = sen3_exp(*m, rand_vec(rng, m->d, 1.2));
  Mat R = X.topLeftCorner(3, 3);
  CHECK((R * R.transpose() - Mat::Identity(3, 3)).norm() < 1e-14);
  CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(X.bottomLeftCorner(2, 3).norm() == 0.0);
  CHECK((X.bottomRightCorner(2, 2) - Mat::Identity(2, 2)).norm() == 0.0);
  CHECK(m->membership_residual(X).has_value());
  CHECK(*m->membership_residual(X) < 1e-13);
}

TEST_CASE("log inverts exp across the branch") {
  std::mt19937_64 rng(107);
  for (int N : {0, 1, 3}) {
    ModelPtr m = make_sen3(N);
    for (int rep = 0; rep < 20; ++rep) {
      Vec v = rand_vec(rng, m->d, 0.8);
      // keep the rotation angle inside the principal branch
      double th = v.head(3).norm();
      if (th >= M_PI - 1e-3) v *= (M_PI - 1e-3) / th;
      Vec back = sen3_log(*m, sen3_exp(*m, v));
      CHECK((back - v).norm() < 1e-12 * std::max(1.0, v.norm()));
    }
  }
}

TEST_CASE("log handles tiny and near-branch angles") {
  ModelPtr m = make_sen3(1);
  Vec v = Vec::Zero(6);
  v[0] = 1e-9;
  v[4] = 0.3;
  CHECK((sen3_log(*m, sen3_exp(*m, v)) - v).norm() < 1e-14);
  Vec w = Vec::Zero(6);
  w[2] = M_PI - 1e-5;
  w[3] = 0.2;
  CHECK((sen3_log(*m, sen3_exp(*m, w)) - w).norm() < 1e-9);
}

TEST_CASE("log throws on the branch cut") {
  ModelPtr m = make_sen3(0);
  Vec v(3);
  v << M_PI, 0.0, 0.0;
  CHECK_THROWS_AS(sen3_log(*m, sen3_exp(*m, v)), BranchError);
}

TEST_CASE("jacobian coefficients reproduce frozen values") {
  JacobianCoefficients jc = sen3_jacobian_coefficients(1.2);
  CHECK(jc.beta[0] == doctest::Approx(-0.49726461074049799).epsilon(1e-14));
  CHECK(jc.beta[1] == doctest::Approx(0.16627137602311259).epsilon(1e-14));
  CHECK(jc.beta[2] == doctest::Approx(-0.037817705412321892).epsilon(1e-14));
  CHECK(jc.beta[3] == doctest::Approx(0.0077787518225809716).epsilon(1e-14));
  JacobianCoefficients at_pi = sen3_jacobian_coefficients(M_PI);
  CHECK(at_pi.beta[0] == doctest::Approx(-0.4052847345693511).epsilon(1e-14));
}

TEST_CASE("jacobian coefficients are smooth across the series switch") {
  // trig form above the seam, power series below; values must agree there
  JacobianCoefficients lo = sen3_jacobian_coefficients(0.9 * (1 - 1e-12));
  JacobianCoefficients hi = sen3_jacobian_coefficients(0.9 * (1 + 1e-12));
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(lo.beta[j] - hi.beta[j]) <
          1e-11 * std::max(1.0, std::abs(hi.beta[j])));
    CHECK(std::abs(lo.psi[j] - hi.psi[j]) <
          1e-11 * std::max(1.0, std::abs(hi.psi[j])));
  }
}

TEST_CASE("psi coefficients track their series deep into the trig branch") {
  // reference: direct summation of the shared-numerator series scaled out
  auto ref_psi34 = [](double t, double& psi3, double& psi4) {
    double f = 1.0;  // (2k)! running
    psi3 = psi4 = 0.0;
    for (int k = 1; k <= 30; ++k) {
      f *= (2 * k - 1) * (2 * k);
      double c = (k % 2 ? 1.0 : -1.0) *
                 (8.0 / f + (2 * k) * (2 * k - 1) / f - 5.0 * (2 * k) / f);
      double d = (k % 2 ? -1.0 : 1.0) *
                 (15.0 / (f * (2 * k + 1)) - 7.0 / f + (2 * k) / f);
      if (k >= 3) {
        psi3 += 0.5 * c * std::pow(t, 2 * (k - 3));
        psi4 += 0.5 * d * std::pow(t, 2 * (k - 3));
      }
    }
  };
  for (double t : {0.05, 0.3, 0.7, 1.1, 2.0, 2.9}) {
    JacobianCoefficients jc = sen3_jacobian_coefficients(t);
    double p3, p4;
    ref_psi34(t, p3, p4);
    CHECK(jc.psi[2] == doctest::Approx(p3).epsilon(1e-10));
    CHECK(jc.psi[3] == doctest::Approx(p4).epsilon(1e-10));
    CHECK(jc.psi[0] == doctest::Approx(t * t * p3).epsilon(1e-10));
    CHECK(jc.psi[1] == doctest::Approx(t * t * p4).epsilon(1e-10));
  }
}

TEST_CASE("psi stays finite at zero angle") {
  JacobianCoefficients jc = sen3_jacobian_coefficients(0.0);
  for (int j = 0; j < 4; ++j) {
    CHECK(std::isfinite(jc.psi[j]));
    CHECK(std::isfinite(jc.beta[j]));
  }
  // dexp(0) = I needs beta to start from the series constants
  CHECK(jc.beta[0] == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("beta derivative consistency") {
  // beta_prime should be the numerical theta-derivative of beta
  const double h = 1e-6;
  for (double theta : {0.3, 1.2, 2.0, 3.0}) {
    JacobianCoefficients lo = sen3_jacobian_coefficients(theta - h);
    JacobianCoefficients hi = sen3_jacobian_coefficients(theta + h);
    JacobianCoefficients mid = sen3_jacobian_coefficients(theta);
    for (int j = 0; j < 4; ++j) {
      double fd = (hi.beta[j] - lo.beta[j]) / (2 * h);
      CHECK(mid.beta_prime[j] == doctest::Approx(fd).epsilon(1e-8));
      CHECK(mid.psi[j] ==
            doctest::Approx(mid.beta_prime[j] / theta).epsilon(1e-13));
    }
  }
}

TEST_CASE("directional overload fills theta_dir") {
  ModelPtr m = make_sen3(1);
  Vec xi(6), gamma(6);
  xi << 0.3, -0.1, 0.2, 0.5, 0.0, -0.4;
  gamma << 0.2, 0.4, -0.3, 0.1, 0.2, 0.3;
  JacobianCoefficients jc = sen3_jacobian_coefficients(*m, xi, gamma);
  double theta = xi.head(3).norm();
  CHECK(jc.theta == doctest::Approx(theta).epsilon(1e-15));
  CHECK(jc.theta_dir ==
        doctest::Approx(xi.head(3).dot(gamma.head(3)) / theta).epsilon(1e-14));
  Vec zero = Vec::Zero(6);
  CHECK(sen3_jacobian_coefficients(*m, zero, gamma).theta_dir == 0.0);
}

TEST_CASE("closed dexp equals the high-order series") {
  std::mt19937_64 rng(109);
  for (int N : {0, 1, 2, 3}) {
    ModelPtr m = make_sen3(N);
    for (int rep = 0; rep < 10; ++rep) {
      Vec xi = rand_vec(rng, m->d, 0.9);
      Mat closed = sen3_dexp_right(*m, xi);
      Mat series = dexp_m(*m, Vec(-xi), 40);
      CHECK((closed - series).norm() < 1e-11 * series.norm());
    }
  }
}

TEST_CASE("closed dexp sweeps the angle range") {
  // deterministic sweep that covers theta near 0 and near pi
  ModelPtr m = make_sen3(1);
  std::mt19937_64 rng(113);
  for (int k = 1; k <= 40; ++k) {
    double theta = 1e-3 + (M_PI - 2e-3) * k / 40.0;
    Vec xi = rand_vec(rng, m->d, 1.0);
    xi.head(3) *= theta / xi.head(3).norm();
    Mat closed = sen3_dexp_right(*m, xi);
    Mat series = dexp_m(*m, Vec(-xi), 50);
    CHECK((closed - series).norm() < 1e-10 * std::max(1.0, series.norm()));
  }
}

TEST_CASE("minimal polynomial of adm") {
  std::mt19937_64 rng(127);
  for (int N : {0, 1, 2, 3}) {
    ModelPtr m = make_sen3(N);
    for (int rep = 0; rep < 10; ++rep) {
      Vec xi = rand_vec(rng, m->d, 1.0);
      CHECK(sen3_minimal_polynomial_residual(*m, xi) < 1e-12);
    }
  }
}

TEST_CASE("closed correction reproduces frozen values") {
  ModelPtr so3 = make_sen3(0);
  Vec x(3), gamma(3);
  x << 0.3, 0.0, 0.0;
  gamma << 0.0, 0.2, 0.0;
  Vec c3 = sen3_c_correction(*so3, x, gamma);
  CHECK(c3[0] == doctest::Approx(0.0019910192616268557).epsilon(1e-13));

  ModelPtr m = make_sen3(2);
  Vec x9(9), g9(9);
  x9 << 0.2, -0.1, 0.3, 0.05, -0.02, 0.04, 0.01, 0.03, -0.02;
  g9 << 0.1, 0.2, -0.05, 0.02, 0.01, -0.03, 0.04, -0.01, 0.02;
  Vec c9 = sen3_c_correction(*m, x9, g9);
  CHECK(c9[0] == doctest::Approx(0.0020499355614750359).epsilon(1e-12));
  CHECK(c9[8] == doctest::Approx(0.00026085551304756173).epsilon(1e-11));
}

TEST_CASE("closed correction equals the series everywhere sampled") {
  std::mt19937_64 rng(131);
  for (int N : {0, 1, 2}) {
    ModelPtr m = make_sen3(N);
    for (int rep = 0; rep < 12; ++rep) {
      Vec x = rand_vec(rng, m->d, 0.8);
      Vec g = rand_vec(rng, m->d, 0.8);
      Vec closed = sen3_c_correction(*m, x, g);
      Vec series = c_correction_series(*m, x, g, NoiseSide::lid, 30);
      CHECK((closed - series).norm() < 1e-12 * std::max(1e-3, series.norm()));
    }
  }
}

TEST_CASE("closed correction handles zero angle") {
  // rotation part zero exercises the psi Taylor branch end to end
  ModelPtr m = make_sen3(1);
  Vec x = Vec::Zero(6), g(6);
  x[4] = 0.5;  // pure translation
  g << 0.1, -0.3, 0.2, 0.4, 0.1, -0.2;
  Vec closed = sen3_c_correction(*m, x, g);
  Vec series = c_correction_series(*m, x, g, NoiseSide::lid, 30);
  CHECK((closed - series).norm() < 1e-14);
}

TEST_CASE("exp and log wrappers round-trip") {
  ModelPtr m = make_sen3(2);
  Vec v(9);
  v << 0.2, -0.3, 0.1, 0.4, 0.0, -0.2, 0.1, 0.3, -0.1;
  AlgebraVector av(m, v);
  GroupElement X = sen3_exp(av);
  CHECK((sen3_log(X).coords - v).norm() < 1e-13);
  CHECK(sen3_minimal_polynomial_residual(av) < 1e-13);
}

}  // TEST_SUITE
