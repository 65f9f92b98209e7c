#include "errdyn/systems.hpp"

#include <cmath>
#include <random>

namespace errdyn {

ControlSignal ControlSignal::none() {
  ControlSignal s;
  s.eval = [](double) { return Vec(); };
  s.identically_zero = true;
  return s;
}

ControlSignal ControlSignal::constant(Vec u) {
  ControlSignal s;
  s.identically_zero = u.size() == 0 || u.isZero(0.0);
  s.eval = [u = std::move(u)](double) { return u; };
  s.piecewise_constant = true;
  return s;
}

ControlSignal ControlSignal::piecewise(std::vector<double> times,
                                       std::vector<Vec> values) {
  if (times.empty() || times.size() != values.size())
    throw std::invalid_argument("ControlSignal::piecewise: times/values mismatch");
  for (size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1])
      throw std::invalid_argument("ControlSignal::piecewise: times not increasing");
  ControlSignal s;
  s.breakpoints = times;
  s.piecewise_constant = true;
  s.eval = [times = std::move(times), values = std::move(values)](double t) {
    size_t i = std::upper_bound(times.begin(), times.end(), t) - times.begin();
    return values[i == 0 ? 0 : i - 1];
  };
  return s;
}

ControlSignal ControlSignal::sinusoid(Vec amplitude, double frequency,
                                      double phase) {
  ControlSignal s;
  s.identically_zero = amplitude.isZero(0.0);
  s.eval = [a = std::move(amplitude), frequency, phase](double t) {
    return Vec(a * std::sin(2.0 * M_PI * frequency * t + phase));
  };
  return s;
}

Mat VectorFieldSpec::eval(double t, const Mat& X) const {
  return eval_with_u(u.eval(t), t, X);
}

Mat VectorFieldSpec::eval_with_u(const Vec& ut, double t, const Mat& X) const {
  switch (kind) {
    case FieldKind::left_invariant:
      return X * hat(*model, ut);
    case FieldKind::right_invariant:
      return hat(*model, ut) * X;
    case FieldKind::commutator: {
      Mat uh = hat(*model, ut);
      return uh * X - X * uh;
    }
    case FieldKind::custom:
      return custom(t, ut, X);
  }
  throw std::logic_error("VectorFieldSpec: bad kind");
}

VectorFieldSpec VectorFieldSpec::left_invariant(ModelPtr m, ControlSignal u) {
  return {std::move(m), FieldKind::left_invariant, std::move(u), nullptr,
          Classification::affine, true};
}

VectorFieldSpec VectorFieldSpec::right_invariant(ModelPtr m, ControlSignal u) {
  return {std::move(m), FieldKind::right_invariant, std::move(u), nullptr,
          Classification::affine, true};
}

VectorFieldSpec VectorFieldSpec::commutator(ModelPtr m, ControlSignal u) {
  return {std::move(m), FieldKind::commutator, std::move(u), nullptr,
          Classification::linear, true};
}

VectorFieldSpec VectorFieldSpec::zero(ModelPtr m) {
  const int n = m->n;
  return {std::move(m), FieldKind::custom, ControlSignal::none(),
          [n](double, const Vec&, const Mat&) { return Mat::Zero(n, n); },
          Classification::linear, true};
}

VectorFieldSpec VectorFieldSpec::custom_field(
    ModelPtr m, std::function<Mat(double, const Vec&, const Mat&)> fn,
    ControlSignal u, Classification classification) {
  return {std::move(m), FieldKind::custom, std::move(u), std::move(fn),
          classification, true};
}

namespace {

// shared draw scheme for the samplers: X = exp(g), g ~ N(0, 0.5^2)
Mat draw_group(const GroupModel& m, std::mt19937_64& eng) {
  std::normal_distribution<double> nd(0.0, 0.5);
  Vec g(m.d);
  for (int i = 0; i < m.d; ++i) g[i] = nd(eng);
  return exp_m(m, g);
}

ClassifyReport check_residuals(const VectorFieldSpec& f, int samples,
                               double tol, double t, uint64_t seed,
                               bool affine) {
  if (samples < 1) throw std::invalid_argument("check: samples must be >= 1");
  const GroupModel& m = *f.model;
  std::mt19937_64 eng(seed);
  const Mat I = Mat::Identity(m.n, m.n);
  double worst = 0.0;
  bool holds = true;
  for (int k = 0; k < samples; ++k) {
    Mat X = draw_group(m, eng);
    Mat Y = draw_group(m, eng);
    Mat lhs = f.eval(t, X * Y);
    Mat rhs = f.eval(t, X) * Y + X * f.eval(t, Y);
    if (affine) rhs -= X * f.eval(t, I) * Y;
    double scale = std::max(1.0, lhs.norm());
    double r = (lhs - rhs).norm() / scale;
    worst = std::max(worst, r);
    if (r >= tol) holds = false;
  }
  return {holds, worst};
}

}  // namespace

ClassifyReport check_linear(const VectorFieldSpec& f, int samples, double tol,
                            double t, uint64_t seed) {
  return check_residuals(f, samples, tol, t, seed, false);
}

ClassifyReport check_affine(const VectorFieldSpec& f, int samples, double tol,
                            double t, uint64_t seed) {
  return check_residuals(f, samples, tol, t, seed, true);
}

namespace {

ControlSignal negate(const ControlSignal& u) {
  ControlSignal s = u;
  auto base = u.eval;
  s.eval = [base](double t) { return Vec(-base(t)); };
  return s;
}

VectorFieldSpec subtract_identity_part(const VectorFieldSpec& f, bool left) {
  // generic wrapper for f(X) - f(I)X (left) or f(X) - X f(I) (right)
  if (f.kind == FieldKind::custom &&
      f.classification != Classification::affine &&
      f.classification != Classification::linear) {
    ClassifyReport rep = check_affine(f, 16, 1e-8);
    if (!rep.holds)
      throw std::invalid_argument(
          "affine reduction: field failed the affine check, residual " +
          std::to_string(rep.max_residual));
  }
  VectorFieldSpec g = f;
  g.kind = FieldKind::custom;
  g.classification = Classification::linear;
  g.custom = [f, left](double t, const Vec& ut, const Mat& X) {
    Mat fI = f.eval_with_u(ut, t, Mat::Identity(X.rows(), X.cols()));
    if (left) return Mat(f.eval_with_u(ut, t, X) - fI * X);
    return Mat(f.eval_with_u(ut, t, X) - X * fI);
  };
  return g;
}

}  // namespace

VectorFieldSpec affine_to_linear(const VectorFieldSpec& f) {
  switch (f.kind) {
    case FieldKind::left_invariant:
      return VectorFieldSpec::zero(f.model);
    case FieldKind::right_invariant:
      return VectorFieldSpec::commutator(f.model, f.u);
    case FieldKind::commutator:
      return f;  // already linear, f(I) = 0
    case FieldKind::custom:
      return subtract_identity_part(f, false);
  }
  throw std::logic_error("affine_to_linear: bad kind");
}

VectorFieldSpec error_linear_part(const VectorFieldSpec& f, ErrorSide side) {
  if (side == ErrorSide::rie) return affine_to_linear(f);
  switch (f.kind) {
    case FieldKind::left_invariant:
      return VectorFieldSpec::commutator(f.model, negate(f.u));
    case FieldKind::right_invariant:
      return VectorFieldSpec::zero(f.model);
    case FieldKind::commutator:
      return f;
    case FieldKind::custom:
      return subtract_identity_part(f, true);
  }
  throw std::logic_error("error_linear_part: bad kind");
}

VectorFieldSpec combine(const VectorFieldSpec& f, const VectorFieldSpec& g,
                        CombineRule rule) {
  auto is_lin = [](const VectorFieldSpec& h) {
    return h.classification == Classification::linear;
  };
  auto is_aff = [](const VectorFieldSpec& h) {
    return h.classification == Classification::affine ||
           h.classification == Classification::linear;
  };
  bool ok = false;
  Classification out = Classification::affine;
  switch (rule) {
    case CombineRule::linear_linear:
      ok = is_lin(f) && is_lin(g);
      out = Classification::linear;
      break;
    case CombineRule::affine_affine:
      ok = is_aff(f) && is_aff(g);
      break;
    case CombineRule::linear_affine:
      ok = (is_lin(f) && is_aff(g)) || (is_aff(f) && is_lin(g));
      break;
  }
  if (!ok)
    throw std::invalid_argument("combine: operand classification mismatch");
  VectorFieldSpec sum = VectorFieldSpec::custom_field(
      f.model,
      [f, g](double t, const Vec&, const Mat& X) {
        return Mat(f.eval(t, X) + g.eval(t, X));
      },
      ControlSignal::none(), out);
  return sum;
}

Mat linearize_at_identity(const VectorFieldSpec& f, double t) {
  const GroupModel& m = *f.model;
  switch (f.kind) {
    case FieldKind::commutator: {
      Mat A(m.d, m.d);
      adm_into(m, f.u.eval(t), A);
      return A;
    }
    case FieldKind::left_invariant:
      return Mat::Zero(m.d, m.d);
    case FieldKind::right_invariant: {
      Mat A(m.d, m.d);
      adm_into(m, f.u.eval(t), A);
      return A;
    }
    case FieldKind::custom:
      break;
  }
  const double h = 1e-6;
  Mat A(m.d, m.d);
  Vec ej = Vec::Zero(m.d);
  for (int j = 0; j < m.d; ++j) {
    ej[j] = h;
    Mat Xp = exp_m(m, ej);
    ej[j] = -h;
    Mat Xm = exp_m(m, ej);
    ej[j] = 0.0;
    Vec gp = vee(m, Xm * f.eval(t, Xp), 1e-4);  // Xm = Xp^{-1}
    Vec gm = vee(m, Xp * f.eval(t, Xm), 1e-4);
    A.col(j) = (gp - gm) / (2.0 * h);
  }
  return A;
}

double check_lemma1(const ModelPtr& m, const Mat& A, int samples,
                    uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat adx(m->d, m->d), adAx(m->d, m->d);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    Vec x(m->d), y(m->d);
    for (int i = 0; i < m->d; ++i) x[i] = nd(eng);
    for (int i = 0; i < m->d; ++i) y[i] = nd(eng);
    adm_into(*m, x, adx);
    adm_into(*m, Vec(A * x), adAx);
    Vec r = adAx * y + adx * (A * y) - A * (adx * y);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

LinearizedSystem LinearizedSystem::from_field(const VectorFieldSpec& f) {
  return {f.model, [f](double t) { return linearize_at_identity(f, t); }};
}

Mat transition_map(const LinearizedSystem& sys, double t0, double t1,
                   double dt) {
  if (dt <= 0.0) throw std::invalid_argument("transition_map: dt must be > 0");
  const int d = sys.model->d;
  Mat Phi = Mat::Identity(d, d);
  const int steps = std::max(1, static_cast<int>(std::round((t1 - t0) / dt)));
  const double h = (t1 - t0) / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    Mat k1 = sys.A(t) * Phi;
    Mat k2 = sys.A(t + h / 2) * (Phi + (h / 2) * k1);
    Mat k3 = sys.A(t + h / 2) * (Phi + (h / 2) * k2);
    Mat k4 = sys.A(t + h) * (Phi + h * k3);
    Phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return Phi;
}

}  // namespace errdyn
