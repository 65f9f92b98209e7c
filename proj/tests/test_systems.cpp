#include <random>

#include "doctest.h"
#include "errdyn/sen3.hpp"
#include "errdyn/systems.hpp"

using namespace errdyn;

namespace {

Vec rand_vec(std::mt19937_64& rng, int d, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = n(rng);
  return v;
}

Vec u3(double a, double b, double c) {
  Vec u(3);
  u << a, b, c;
  return u;
}

}  // namespace

TEST_SUITE("systems") {

TEST_CASE("constant signal") {
  ControlSignal s = ControlSignal::constant(u3(1.0, -2.0, 3.0));
  CHECK((s.eval(0.0) - u3(1.0, -2.0, 3.0)).norm() == 0.0);
  CHECK((s.eval(17.5) - u3(1.0, -2.0, 3.0)).norm() == 0.0);
  CHECK(s.piecewise_constant);
  CHECK(!s.identically_zero);
}

TEST_CASE("zero signal") {
  ControlSignal s = ControlSignal::none();
  CHECK(s.identically_zero);
  CHECK(s.eval(1.0).size() == 0);
}

TEST_CASE("piecewise signal is right-continuous and extends its last value") {
  std::vector<double> times{0.0, 0.4, 0.7};
  std::vector<Vec> values{u3(1, 0, 0), u3(0, 1, 0), u3(0, 0, 1)};
  ControlSignal s = ControlSignal::piecewise(times, values);
  CHECK(s.piecewise_constant);
  CHECK(s.breakpoints.size() == 3);
  CHECK((s.eval(0.0) - values[0]).norm() == 0.0);
  CHECK((s.eval(0.39999) - values[0]).norm() == 0.0);
  CHECK((s.eval(0.4) - values[1]).norm() == 0.0);  // switch takes effect at t
  CHECK((s.eval(0.69999) - values[1]).norm() == 0.0);
  CHECK((s.eval(0.7) - values[2]).norm() == 0.0);
  CHECK((s.eval(100.0) - values[2]).norm() == 0.0);
  // before the first breakpoint the first value holds
  CHECK((s.eval(-1.0) - values[0]).norm() == 0.0);
}

TEST_CASE("piecewise signal validates its inputs") {
  CHECK_THROWS_AS(
      ControlSignal::piecewise({0.0, 1.0}, {u3(1, 0, 0)}),
      std::invalid_argument);
  CHECK_THROWS_AS(ControlSignal::piecewise({1.0, 0.0},
                                           {u3(1, 0, 0), u3(0, 1, 0)}),
                  std::invalid_argument);
}

TEST_CASE("sinusoid signal") {
  Vec amp = u3(2.0, 0.0, -1.0);
  ControlSignal s = ControlSignal::sinusoid(amp, 0.8, 0.3);
  CHECK(!s.piecewise_constant);
  Vec expect = amp * std::sin(2.0 * M_PI * 0.8 * 1.7 + 0.3);
  CHECK((s.eval(1.7) - expect).norm() < 1e-15);
}

TEST_CASE("builtin fields evaluate their defining products") {
  ModelPtr m = make_sen3(1);
  std::mt19937_64 rng(211);
  Vec u = rand_vec(rng, m->d, 0.8);
  Mat X = exp_m(*m, rand_vec(rng, m->d, 0.6));
  Mat uh = hat(*m, u);
  VectorFieldSpec li = VectorFieldSpec::left_invariant(m, ControlSignal::constant(u));
  VectorFieldSpec ri = VectorFieldSpec::right_invariant(m, ControlSignal::constant(u));
  VectorFieldSpec co = VectorFieldSpec::commutator(m, ControlSignal::constant(u));
  CHECK((li.eval(0.0, X) - X * uh).norm() == 0.0);
  CHECK((ri.eval(0.0, X) - uh * X).norm() == 0.0);
  CHECK((co.eval(0.0, X) - (uh * X - X * uh)).norm() == 0.0);
  VectorFieldSpec z = VectorFieldSpec::zero(m);
  CHECK(z.eval(3.0, X).norm() == 0.0);
}

TEST_CASE("classification of the builtin kinds") {
  ModelPtr m = make_sen3(0);
  ControlSignal u = ControlSignal::constant(u3(0.4, -0.3, 0.2));
  VectorFieldSpec li = VectorFieldSpec::left_invariant(m, u);
  VectorFieldSpec ri = VectorFieldSpec::right_invariant(m, u);
  VectorFieldSpec co = VectorFieldSpec::commutator(m, u);
  CHECK(li.classification == Classification::affine);
  CHECK(ri.classification == Classification::affine);
  CHECK(co.classification == Classification::linear);
  CHECK(!check_linear(li).holds);
  CHECK(check_affine(li).holds);
  CHECK(!check_linear(ri).holds);
  CHECK(check_affine(ri).holds);
  CHECK(check_linear(co).holds);
  // linear implies affine
  CHECK(check_affine(co).holds);
}

TEST_CASE("classification rejects a genuinely nonlinear field") {
  ModelPtr m = make_sen3(0);
  auto fn = [m](double, const Vec&, const Mat& X) -> Mat {
    return X * hat(*m, u3(0.3, 0.1, -0.2)) * X;  // quadratic in X
  };
  VectorFieldSpec f = VectorFieldSpec::custom_field(m, fn);
  CHECK(!check_linear(f).holds);
  CHECK(!check_affine(f).holds);
  CHECK(check_linear(f).max_residual > 1e-3);
}

TEST_CASE("custom affine field passes the affine check") {
  ModelPtr m = make_sen3(0);
  Vec u = u3(0.4, -0.3, 0.2), w = u3(0.1, 0.2, -0.1);
  auto fn = [m, u, w](double, const Vec&, const Mat& X) -> Mat {
    return hat(*m, u) * X - X * hat(*m, u) + X * hat(*m, w);
  };
  VectorFieldSpec f = VectorFieldSpec::custom_field(m, fn);
  CHECK(check_affine(f).holds);
  CHECK(!check_linear(f).holds);
}

TEST_CASE("affine_to_linear subtracts the identity value") {
  ModelPtr m = make_sen3(1);
  std::mt19937_64 rng(223);
  Vec u = rand_vec(rng, m->d, 0.7);
  ControlSignal cu = ControlSignal::constant(u);
  // left-invariant fields lose everything
  VectorFieldSpec li = VectorFieldSpec::left_invariant(m, cu);
  VectorFieldSpec hli = affine_to_linear(li);
  Mat X = exp_m(*m, rand_vec(rng, m->d, 0.5));
  CHECK(hli.eval(0.0, X).norm() < 1e-15);
  // right-invariant fields reduce to the commutator
  VectorFieldSpec ri = VectorFieldSpec::right_invariant(m, cu);
  VectorFieldSpec hri = affine_to_linear(ri);
  Mat uh = hat(*m, u);
  CHECK((hri.eval(0.0, X) - (uh * X - X * uh)).norm() < 1e-15);
  // the reduced field vanishes at the identity
  Mat I = Mat::Identity(m->n, m->n);
  CHECK(hri.eval(0.0, I).norm() < 1e-15);
  CHECK(hri.classification == Classification::linear);
}

TEST_CASE("error_linear_part matches its side conventions") {
  ModelPtr m = make_sen3(0);
  std::mt19937_64 rng(227);
  Vec u = rand_vec(rng, m->d, 0.7);
  VectorFieldSpec f = VectorFieldSpec::left_invariant(m, ControlSignal::constant(u));
  Mat X = exp_m(*m, rand_vec(rng, m->d, 0.5));
  Mat I = Mat::Identity(m->n, m->n);
  Mat fI = f.eval(0.0, I);
  VectorFieldSpec gl = error_linear_part(f, ErrorSide::lie);
  VectorFieldSpec gr = error_linear_part(f, ErrorSide::rie);
  CHECK((gl.eval(0.0, X) - (f.eval(0.0, X) - fI * X)).norm() < 1e-14);
  CHECK((gr.eval(0.0, X) - (f.eval(0.0, X) - X * fI)).norm() < 1e-14);
}

TEST_CASE("combine respects the closure rules") {
  ModelPtr m = make_sen3(0);
  ControlSignal u = ControlSignal::constant(u3(0.4, -0.3, 0.2));
  ControlSignal w = ControlSignal::constant(u3(-0.1, 0.2, 0.5));
  VectorFieldSpec lin1 = VectorFieldSpec::commutator(m, u);
  VectorFieldSpec lin2 = VectorFieldSpec::commutator(m, w);
  VectorFieldSpec aff = VectorFieldSpec::left_invariant(m, w);

  VectorFieldSpec ll = combine(lin1, lin2, CombineRule::linear_linear);
  CHECK(ll.classification == Classification::linear);
  CHECK(check_linear(ll).holds);

  VectorFieldSpec la = combine(lin1, aff, CombineRule::linear_affine);
  CHECK(la.classification == Classification::affine);
  CHECK(check_affine(la).holds);

  Mat X = exp_m(*m, u3(0.2, 0.1, -0.3));
  CHECK((ll.eval(0.0, X) - (lin1.eval(0.0, X) + lin2.eval(0.0, X))).norm() ==
        0.0);

  CHECK_THROWS_AS(combine(aff, lin1, CombineRule::linear_linear),
                  std::invalid_argument);
}

TEST_CASE("linearize_at_identity analytic cases") {
  ModelPtr m = make_sen3(2);
  std::mt19937_64 rng(229);
  Vec u = rand_vec(rng, m->d, 0.8);
  Mat A(m->d, m->d);
  adm_into(*m, u, A);
  ControlSignal cu = ControlSignal::constant(u);
  // commutator linearizes to adm(u)
  Mat Ac = linearize_at_identity(VectorFieldSpec::commutator(m, cu), 0.0);
  CHECK((Ac - A).norm() == 0.0);
  // left-invariant reduction is the zero map
  VectorFieldSpec hli =
      affine_to_linear(VectorFieldSpec::left_invariant(m, cu));
  CHECK(linearize_at_identity(hli, 0.0).norm() == 0.0);
  // right-invariant reduction linearizes to adm(u) as well
  VectorFieldSpec hri =
      affine_to_linear(VectorFieldSpec::right_invariant(m, cu));
  CHECK((linearize_at_identity(hri, 0.0) - A).norm() < 1e-14);
}

TEST_CASE("linearize_at_identity falls back to finite differences") {
  ModelPtr m = make_sen3(0);
  Vec u = u3(0.4, -0.3, 0.2);
  auto fn = [m, u](double, const Vec&, const Mat& X) -> Mat {
    return hat(*m, u) * X - X * hat(*m, u);
  };
  VectorFieldSpec f = VectorFieldSpec::custom_field(
      m, fn, ControlSignal::none(), Classification::linear);
  Mat A(m->d, m->d);
  adm_into(*m, u, A);
  CHECK((linearize_at_identity(f, 0.0) - A).norm() < 1e-7);
}

TEST_CASE("time-varying input reaches the linearization") {
  ModelPtr m = make_sen3(0);
  std::vector<double> times{0.0, 1.0};
  std::vector<Vec> values{u3(0.4, -0.3, 0.2), u3(-0.2, 0.5, 0.1)};
  VectorFieldSpec f = VectorFieldSpec::commutator(
      m, ControlSignal::piecewise(times, values));
  Mat A0(m->d, m->d), A1(m->d, m->d);
  adm_into(*m, values[0], A0);
  adm_into(*m, values[1], A1);
  CHECK((linearize_at_identity(f, 0.5) - A0).norm() == 0.0);
  CHECK((linearize_at_identity(f, 1.5) - A1).norm() == 0.0);
}

TEST_CASE("adm matrices are derivations of the bracket") {
  ModelPtr m = make_sen3(1);
  std::mt19937_64 rng(233);
  Vec u = rand_vec(rng, m->d, 0.8);
  Mat A(m->d, m->d);
  adm_into(*m, u, A);
  CHECK(check_lemma1(m, A) < 1e-13);
  // a random matrix is not a derivation
  Mat R = Mat::Random(m->d, m->d);
  CHECK(check_lemma1(m, R) > 1e-3);
}

TEST_CASE("transition map of a frozen linearization") {
  ModelPtr m = make_sen3(0);
  Vec u = u3(0.4, -0.3, 0.2);
  VectorFieldSpec f = VectorFieldSpec::commutator(m, ControlSignal::constant(u));
  LinearizedSystem sys = LinearizedSystem::from_field(f);
  Mat A(m->d, m->d);
  adm_into(*m, u, A);
  CHECK((sys.A(0.7) - A).norm() == 0.0);
  Mat Phi = transition_map(sys, 0.0, 1.0, 1e-3);
  // constant A: Phi = exp(A), and exp(adm(u)) = Ad(exp(u^))
  Mat want = Ad(*m, exp_m(*m, u));
  CHECK((Phi - want).norm() < 1e-10);
  // no elapsed time, no motion
  CHECK((transition_map(sys, 0.3, 0.3, 1e-3) - Mat::Identity(3, 3)).norm() ==
        0.0);
}

TEST_CASE("eval_with_u freezes the input sample") {
  ModelPtr m = make_sen3(0);
  std::vector<double> times{0.0, 0.5};
  std::vector<Vec> values{u3(1, 0, 0), u3(0, 1, 0)};
  VectorFieldSpec f = VectorFieldSpec::left_invariant(
      m, ControlSignal::piecewise(times, values));
  Mat X = exp_m(*m, u3(0.1, 0.2, 0.3));
  // evaluate past the switch but with the pre-switch sample held
  Mat held = f.eval_with_u(values[0], 0.9, X);
  CHECK((held - X * hat(*m, values[0])).norm() == 0.0);
  CHECK((f.eval(0.9, X) - X * hat(*m, values[1])).norm() == 0.0);
}

}  // TEST_SUITE
