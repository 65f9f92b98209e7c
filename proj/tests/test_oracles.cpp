#include <random>

#include "doctest.h"
#include "errdyn/oracles.hpp"
#include "errdyn/sen3.hpp"

using namespace errdyn;

namespace {

Vec u3(double a, double b, double c) {
  Vec u(3);
  u << a, b, c;
  return u;
}

Vec se23_x() {
  Vec x(9);
  x << 0.2, -0.1, 0.3, 0.05, -0.02, 0.04, 0.01, 0.03, -0.02;
  return x;
}

Vec se23_g() {
  Vec g(9);
  g << 0.1, 0.2, -0.05, 0.02, 0.01, -0.03, 0.04, -0.01, 0.02;
  return g;
}

}  // namespace

TEST_SUITE("oracles") {

TEST_CASE("report comparison and its pass boundary") {
  OracleReport r = OracleReport::compare("q", 2.0, 2.5, 1.0);
  CHECK(r.quantity == "q");
  CHECK(r.abs_error == 0.5);
  CHECK(r.rel_error == 0.25);
  CHECK(r.pass);
  CHECK(OracleReport::compare("q", 2.0, 3.0, 1.0).pass);       // at tolerance
  CHECK(!OracleReport::compare("q", 2.0, 3.0001, 1.0).pass);   // just past
  // zero reference keeps rel_error finite
  OracleReport z = OracleReport::compare("q", 0.0, 1e-12, 1e-9);
  CHECK(z.pass);
  CHECK(std::isfinite(z.rel_error));
}

TEST_CASE("dexp-derivative oracle confirms the correction series") {
  ModelPtr so3 = make_so3();
  Vec x = u3(0.3, -0.1, 0.2);
  Vec g = u3(0.1, 0.25, -0.15);
  for (NoiseSide side : {NoiseSide::lid, NoiseSide::rid}) {
    Vec ref = oracle_c_via_dexp_derivative(*so3, x, g, side);
    Vec series = c_correction_series(*so3, x, g, side, 30);
    Vec fast = c_correction_fast(*so3, x, g, side);
    CHECK((ref - series).norm() < 1e-6);
    CHECK((ref - fast).norm() < 1e-6);
  }
  ModelPtr se23 = make_sen3(2);
  for (NoiseSide side : {NoiseSide::lid, NoiseSide::rid}) {
    Vec ref = oracle_c_via_dexp_derivative(*se23, se23_x(), se23_g(), side);
    Vec series = c_correction_series(*se23, se23_x(), se23_g(), side, 30);
    Vec fast = c_correction_fast(*se23, se23_x(), se23_g(), side);
    CHECK((ref - series).norm() < 1e-6);
    CHECK((ref - fast).norm() < 1e-6);
  }
}

TEST_CASE("finite-difference power-derivative oracle") {
  ModelPtr m = make_sen3(1);
  std::mt19937_64 rng(521);
  std::normal_distribution<double> nd(0.0, 0.5);
  Vec x(m->d), g(m->d);
  for (int i = 0; i < m->d; ++i) {
    x[i] = nd(rng);
    g[i] = nd(rng);
  }
  for (int n = 1; n <= 4; ++n) {
    Mat fd = oracle_dadmn_fd(*m, x, g, n);
    Mat exact = dadmn(*m, x, g, n);
    CHECK((fd - exact).norm() < 1e-8 * std::max(1.0, exact.norm()));
  }
  CHECK_THROWS_AS(oracle_dadmn_fd(*m, x, g, 0), std::invalid_argument);
}

TEST_CASE("short-time drift oracle validates its regime") {
  ModelPtr m = make_so3();
  VectorFieldSpec f = VectorFieldSpec::commutator(
      m, ControlSignal::constant(u3(0.4, -0.3, 0.2)));
  NoiseModel nm = NoiseModel::isotropic(m, NoiseSide::lid, 0.2);
  Vec x = u3(0.1, -0.05, 0.08);
  CHECK_THROWS_AS(oracle_short_time_drift(f, nm, x, 0.0, 20000),
                  std::invalid_argument);
  CHECK_THROWS_AS(oracle_short_time_drift(f, nm, x, 2e-3, 20000),
                  std::invalid_argument);
  CHECK_THROWS_AS(oracle_short_time_drift(f, nm, x, 1e-3, 9999),
                  std::invalid_argument);
  CHECK_THROWS_AS(oracle_short_time_drift(f, nm, x, 1e-3, 20000, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("short-time drift agrees with the log-coordinate coefficients") {
  ModelPtr m = make_so3();
  Vec u = u3(0.4, -0.3, 0.2);
  VectorFieldSpec f = VectorFieldSpec::commutator(m, ControlSignal::constant(u));
  NoiseModel nm = NoiseModel::isotropic(m, NoiseSide::lid, 0.2);
  Vec x = u3(0.1, -0.05, 0.08);
  DriftEstimate est = oracle_short_time_drift(f, nm, x, 1e-3, 20000, 2024);
  SdeCoefficients c = algebra_sde_coefficients(f, nm, x, 0.0);
  REQUIRE(est.paths == 20000);
  for (int i = 0; i < 3; ++i) {
    // 3 sigma plus a small allowance for the O(dtau) discretization bias
    double band = 3.0 * est.stderr_drift[i] + 1e-4;
    CHECK(std::abs(est.drift[i] - c.drift[i]) < band);
  }
  // the correction term is what separates the drift from plain A x; make
  // sure the experiment actually resolves it
  Mat A(3, 3);
  adm_into(*m, u, A);
  Vec bare = A * x;
  CHECK((c.drift - bare).norm() > 1e-4);
}

}  // TEST_SUITE
