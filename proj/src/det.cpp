#include "errdyn/det.hpp"

#include <cmath>

namespace errdyn {

namespace {

int step_count(double t0, double T, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("integrate: dt must be > 0");
  const int steps = static_cast<int>(std::round((T - t0) / dt));
  if (steps < 1) throw std::invalid_argument("integrate: empty horizon");
  return steps;
}

// one RKMK4 step through the exponential chart at X
Mat rkmk4_step(const VectorFieldSpec& f, const Vec* frozen_u, double t,
               double h, const Mat& X) {
  const GroupModel& m = *f.model;
  auto stage = [&](double tau, const Vec& y) {
    Mat Y = X * exp_m(m, y);
    Mat fv = frozen_u ? f.eval_with_u(*frozen_u, tau, Y) : f.eval(tau, Y);
    Vec v = vee(m, Y.partialPivLu().solve(fv), 1e-6);
    return Vec(dexp_neg_inv_fast(m, y) * v);
  };
  const Vec z = Vec::Zero(m.d);
  Vec k1 = stage(t, z);
  Vec k2 = stage(t + h / 2, Vec(h / 2 * k1));
  Vec k3 = stage(t + h / 2, Vec(h / 2 * k2));
  Vec k4 = stage(t + h, Vec(h * k3));
  Vec y = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return X * exp_m(m, y);
}

Mat lie_euler_step(const VectorFieldSpec& f, const Vec* frozen_u, double t,
                   double h, const Mat& X) {
  const GroupModel& m = *f.model;
  Mat fv = frozen_u ? f.eval_with_u(*frozen_u, t, X) : f.eval(t, X);
  Vec a = vee(m, X.partialPivLu().solve(fv), 1e-6);
  return X * exp_m(m, Vec(h * a));
}

}  // namespace

Trajectory integrate_group_ode(const VectorFieldSpec& f, const Mat& X0,
                               double t0, double T, double dt,
                               OdeMethod method) {
  if (X0.rows() != f.model->n || X0.cols() != f.model->n)
    throw std::invalid_argument("integrate_group_ode: X0 is not n x n");
  const int steps = step_count(t0, T, dt);
  const double h = (T - t0) / steps;
  Trajectory traj;
  traj.dt = h;
  traj.integrator = method == OdeMethod::rkmk4 ? "rkmk4" : "lie_euler";
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(t0);
  traj.states.push_back(X0);
  Mat X = X0;
  const bool freeze = f.u.piecewise_constant;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    Vec umid;
    const Vec* fu = nullptr;
    if (freeze) {
      umid = f.u.eval(t + h / 2);
      fu = &umid;
    }
    X = method == OdeMethod::rkmk4 ? rkmk4_step(f, fu, t, h, X)
                                   : lie_euler_step(f, fu, t, h, X);
    traj.times.push_back(t0 + (k + 1) * h);
    traj.states.push_back(X);
  }
  return traj;
}

Mat invariant_error(const Mat& X, const Mat& Xhat, ErrorSide side) {
  if (side == ErrorSide::lie) return Xhat.partialPivLu().solve(X);
  return X * Xhat.partialPivLu().inverse();
}

GroupElement invariant_error(const GroupElement& X, const GroupElement& Xhat,
                             ErrorSide side) {
  return GroupElement(X.model, invariant_error(X.mat, Xhat.mat, side));
}

Mat interpolate_geodesic(const GroupModel& m, const Trajectory& traj,
                         double t) {
  const double t0 = traj.times.front();
  const double tN = traj.times.back();
  if (t <= t0) return traj.states.front();
  if (t >= tN) return traj.states.back();
  const int k = std::min(traj.steps() - 1,
                         static_cast<int>((t - t0) / traj.dt));
  const double s = (t - (t0 + k * traj.dt)) / traj.dt;
  if (s < 1e-12) return traj.at(k);
  if (s > 1.0 - 1e-12) return traj.at(k + 1);
  const Mat& Xk = traj.at(k);
  Vec step = log_m(m, Xk.partialPivLu().solve(traj.at(k + 1)));
  return Xk * exp_m(m, Vec(s * step));
}

VectorFieldSpec error_field(const VectorFieldSpec& f, ErrorSide side,
                            const DisturbanceSignal& w,
                            std::function<Mat(double)> xhat) {
  if (f.classification != Classification::affine &&
      f.classification != Classification::linear) {
    ClassifyReport rep = check_affine(f, 16, 1e-8);
    if (!rep.holds)
      throw std::invalid_argument("error_field: f is not group-affine");
  }
  ModelPtr model = f.model;
  DisturbanceSide dside = w.side;
  ControlSignal wsig = w.w;
  // the subtraction uses whatever u the integrator hands in, so per-step
  // freezing of piecewise-constant inputs reaches the linear part too
  auto fn = [model, f, side, dside, wsig, xhat = std::move(xhat)](
                double t, const Vec& ut, const Mat& eta) {
    const Mat I = Mat::Identity(eta.rows(), eta.cols());
    Mat fI = f.eval_with_u(ut, t, I);
    Mat out = f.eval_with_u(ut, t, eta);
    if (side == ErrorSide::lie)
      out -= fI * eta;
    else
      out -= eta * fI;
    Vec wt = wsig.eval(t);
    if (wt.size() == 0 || wsig.identically_zero) return out;
    if (side == ErrorSide::lie) {
      if (dside == DisturbanceSide::left_invariant) {
        out += eta * hat(*model, wt);
      } else {
        Mat Xh = xhat(t);
        out += hat(*model,
                   Vec(Ad(*model, Mat(Xh.partialPivLu().inverse())) * wt)) *
               eta;
      }
    } else {
      if (dside == DisturbanceSide::left_invariant) {
        out += eta * hat(*model, Vec(Ad(*model, xhat(t)) * wt));
      } else {
        out += hat(*model, wt) * eta;
      }
    }
    return out;
  };
  Classification cls = wsig.identically_zero ? Classification::linear
                                             : Classification::affine;
  return VectorFieldSpec::custom_field(f.model, std::move(fn), f.u, cls);
}

namespace {

struct ErrorRhs {
  const GroupModel& m;
  VectorFieldSpec lin;          // side-reduced linear part of f
  ErrorSide side;
  DisturbanceSide dside;
  const ControlSignal& wsig;
  const Trajectory& xhat;
  bool freeze_u;

  // A_t can be frozen across a step for piecewise-constant u
  Mat A_at(double t) const { return linearize_at_identity(lin, t); }

  Vec eval(double t, const Vec& xi, const Mat& A) const {
    Vec out = A * xi;
    Vec wt = wsig.eval(t);
    if (wt.size() == 0 || wsig.identically_zero) return out;
    const bool neg_chart = (dside == DisturbanceSide::left_invariant);
    Vec weff;
    if (side == ErrorSide::lie) {
      weff = (dside == DisturbanceSide::left_invariant)
                 ? wt
                 : Vec(Ad(m, Mat(interpolate_geodesic(m, xhat, t)
                                     .partialPivLu()
                                     .inverse())) *
                       wt);
    } else {
      weff = (dside == DisturbanceSide::left_invariant)
                 ? Vec(Ad(m, interpolate_geodesic(m, xhat, t)) * wt)
                 : wt;
    }
    // left-entering disturbances use dexp_m^-1(+xi) instead of (-xi)
    Mat Dinv = neg_chart ? dexp_neg_inv_fast(m, xi)
                         : dexp_neg_inv_fast(m, Vec(-xi));
    out += Dinv * weff;
    return out;
  }
};

}  // namespace

ErrorTrajectory integrate_error_ode_algebra(const VectorFieldSpec& f,
                                            ErrorSide side,
                                            const DisturbanceSignal& w,
                                            const Trajectory& xhat,
                                            const Vec& xi0, double dt) {
  const GroupModel& m = *f.model;
  const double t0 = xhat.times.front();
  const double T = xhat.times.back();
  const int steps = step_count(t0, T, dt);
  const double h = (T - t0) / steps;
  ErrorRhs rhs{m, error_linear_part(f, side), side, w.side, w.w, xhat,
               f.u.piecewise_constant};
  ErrorTrajectory out;
  out.side = side;
  out.times.push_back(t0);
  out.xi.push_back(xi0);
  Vec xi = xi0;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    try {
      Mat A0, Am, A1;
      if (rhs.freeze_u) {
        A0 = rhs.A_at(t + h / 2);  // constant across the step
        Am = A0;
        A1 = A0;
      } else {
        A0 = rhs.A_at(t);
        Am = rhs.A_at(t + h / 2);
        A1 = rhs.A_at(t + h);
      }
      Vec k1 = rhs.eval(t, xi, A0);
      Vec k2 = rhs.eval(t + h / 2, Vec(xi + h / 2 * k1), Am);
      Vec k3 = rhs.eval(t + h / 2, Vec(xi + h / 2 * k2), Am);
      Vec k4 = rhs.eval(t + h, Vec(xi + h * k3), A1);
      xi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const SingularityError&) {
      out.singular_time = t;
      return out;
    }
    out.times.push_back(t0 + (k + 1) * h);
    out.xi.push_back(xi);
  }
  return out;
}

ErrorTrajectory integrate_error_ode_group(const VectorFieldSpec& f,
                                          ErrorSide side,
                                          const DisturbanceSignal& w,
                                          const Trajectory& xhat,
                                          const Vec& xi0, double dt) {
  const GroupModel& m = *f.model;
  auto xh = [&m, &xhat](double t) { return interpolate_geodesic(m, xhat, t); };
  // error_field keeps f.u as its own input signal, so the state integrator
  // applies the same per-step freezing here as on the plant
  VectorFieldSpec ef = error_field(f, side, w, xh);
  const double t0 = xhat.times.front();
  const double T = xhat.times.back();
  Trajectory eta_traj =
      integrate_group_ode(ef, exp_m(m, xi0), t0, T, dt, OdeMethod::rkmk4);
  ErrorTrajectory out;
  out.side = side;
  out.times = eta_traj.times;
  out.eta = eta_traj.states;
  out.xi.reserve(out.eta.size());
  for (size_t k = 0; k < out.eta.size(); ++k) {
    try {
      out.xi.push_back(log_m(m, out.eta[k]));
    } catch (const BranchError&) {
      out.singular_time = out.times[k];
      out.times.resize(k);
      out.eta.resize(k);
      break;
    }
  }
  return out;
}

}  // namespace errdyn
