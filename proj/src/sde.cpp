#include "errdyn/sde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "errdyn/threads.hpp"

namespace errdyn {

namespace {

int step_count(double t0, double T, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("integrate: dt must be > 0");
  const int steps = static_cast<int>(std::round((T - t0) / dt));
  if (steps < 1) throw std::invalid_argument("integrate: empty horizon");
  return steps;
}

// projection onto algebra coordinates without the span check; hot paths only
// feed it matrices that are tangent by construction
Vec vee_raw(const GroupModel& m, const Mat& M) {
  return m.vee_projector() * Eigen::Map<const Vec>(M.data(), M.size());
}

void require_path(const BrownianPath& path, double dt, int steps, int m) {
  if (std::abs(path.dt - dt) > 1e-12 * std::max(1.0, dt))
    throw std::invalid_argument("sde: path.dt does not match dt");
  if (path.steps() < steps)
    throw std::invalid_argument("sde: path too short for the horizon");
  if (m > 0 && path.dim() != m)
    throw std::invalid_argument("sde: path dimension != noise channels");
}

}  // namespace

bool NoiseModel::is_zero() const {
  return S.size() == 0 || S.isZero(0.0);
}

Mat NoiseModel::recompute_pinning() const {
  const int n = model->n;
  Mat P = Mat::Zero(n, n);
  for (int k = 0; k < S.cols(); ++k) {
    Mat sk = hat(*model, Vec(S.col(k)));
    P += sk * sk;
  }
  return P;
}

NoiseModel NoiseModel::make(ModelPtr model, NoiseSide side, Mat S) {
  if (!model) throw std::invalid_argument("NoiseModel: null model");
  if (S.size() == 0) S = Mat::Zero(model->d, 0);
  if (S.rows() != model->d)
    throw std::invalid_argument("NoiseModel: S must have d rows");
  NoiseModel nm;
  nm.model = std::move(model);
  nm.side = side;
  nm.S = std::move(S);
  nm.pinning = nm.recompute_pinning();
  nm.covariance = nm.S * nm.S.transpose();
  return nm;
}

NoiseModel NoiseModel::isotropic(ModelPtr model, NoiseSide side,
                                 double sigma) {
  const int d = model->d;
  return make(std::move(model), side, Mat(sigma * Mat::Identity(d, d)));
}

VectorFieldSpec strat_to_ito(const VectorFieldSpec& f,
                             const NoiseModel& noise) {
  if (f.model->n != noise.model->n || f.model->d != noise.model->d)
    throw std::invalid_argument("strat_to_ito: field and noise models differ");
  if (noise.is_zero()) return f;
  const bool lid = noise.side == NoiseSide::lid;
  Mat halfP = 0.5 * noise.pinning;
  auto fn = [f, halfP = std::move(halfP), lid](double t, const Vec& ut,
                                               const Mat& X) {
    Mat out = f.eval_with_u(ut, t, X);
    if (lid)
      out += X * halfP;
    else
      out += halfP * X;
    return out;
  };
  Classification cls = (f.classification == Classification::linear ||
                        f.classification == Classification::affine)
                           ? Classification::affine
                           : Classification::unknown;
  VectorFieldSpec g =
      VectorFieldSpec::custom_field(f.model, std::move(fn), f.u, cls);
  g.tangent = false;  // the pinning part lies off the algebra
  return g;
}

namespace {

// chart drift a with X_next = X exp(a dt + S dW) (lid) or exp(...) X (rid);
// em_ito subtracts the pinning half inside the chart, which must cancel the
// correction carried by an Ito drift exactly
Vec chart_drift(const GroupModel& m, const VectorFieldSpec& f,
                const NoiseModel& noise, SdeScheme scheme, double t,
                const Mat& X) {
  Mat fv = f.eval(t, X);
  Mat chart;
  if (noise.side == NoiseSide::lid)
    chart = X.partialPivLu().solve(fv);
  else
    chart = (X.transpose().partialPivLu().solve(fv.transpose())).transpose();
  if (scheme == SdeScheme::em_ito && !noise.is_zero())
    chart -= 0.5 * noise.pinning;
  return vee(m, chart, 1e-6);
}

}  // namespace

Trajectory integrate_group_sde(const VectorFieldSpec& f,
                               const NoiseModel& noise, const Mat& X0,
                               double t0, double T, double dt,
                               const BrownianPath& path, SdeScheme scheme) {
  const GroupModel& m = *f.model;
  const int steps = step_count(t0, T, dt);
  require_path(path, dt, steps, noise.is_zero() ? -1 : noise.channels());
  const bool lid = noise.side == NoiseSide::lid;
  Trajectory traj;
  traj.dt = dt;
  traj.integrator = scheme == SdeScheme::em_ito ? "em_ito" : "heun_strat";
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(t0);
  traj.states.push_back(X0);
  Mat X = X0;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * dt;
    Vec noise_part = Vec::Zero(m.d);
    if (!noise.is_zero())
      noise_part = noise.S * path.increments.row(k).transpose();
    Vec a = chart_drift(m, f, noise, scheme, t, X);
    Vec v;
    if (scheme == SdeScheme::heun_strat) {
      Mat Xp = lid ? Mat(X * exp_m(m, Vec(a * dt + noise_part)))
                   : Mat(exp_m(m, Vec(a * dt + noise_part)) * X);
      Vec a1 = chart_drift(m, f, noise, scheme, t + dt, Xp);
      v = 0.5 * (a + a1) * dt + noise_part;
    } else {
      v = a * dt + noise_part;
    }
    Mat E = exp_m(m, v);
    X = lid ? Mat(X * E) : Mat(E * X);
    traj.times.push_back(t0 + (k + 1) * dt);
    traj.states.push_back(X);
  }
  return traj;
}

namespace {

// shared lid-form assembly once the effective channel columns are known
SdeCoefficients log_coordinate_coefficients(const GroupModel& m, const Mat& A,
                                            const Vec& x, const Mat& channels,
                                            NoiseSide side, double t) {
  const bool lid = side == NoiseSide::lid;
  Mat D = lid ? dexp_neg_fast(m, x) : dexp_neg_fast(m, Vec(-x));
  auto lu = D.partialPivLu();
  if (lu.rcond() < 1e-12)
    throw SingularityError("algebra sde: dexp numerically singular", t);
  SdeCoefficients out;
  out.diffusion = lu.solve(channels);
  Vec csum = Vec::Zero(m.d);
  for (int k = 0; k < out.diffusion.cols(); ++k)
    csum += c_correction_fast(m, x, Vec(out.diffusion.col(k)), side);
  out.drift = A * x;
  if (out.diffusion.cols() > 0) out.drift -= 0.5 * lu.solve(csum);
  return out;
}

}  // namespace

SdeCoefficients algebra_sde_coefficients(const VectorFieldSpec& f_linear,
                                         const NoiseModel& noise, const Vec& x,
                                         double t) {
  const GroupModel& m = *f_linear.model;
  if (f_linear.classification != Classification::linear) {
    ClassifyReport rep = check_linear(f_linear, 16, 1e-8);
    if (!rep.holds)
      throw std::invalid_argument(
          "algebra_sde_coefficients: drift field is not group-linear");
  }
  Mat A = linearize_at_identity(f_linear, t);
  return log_coordinate_coefficients(m, A, x, noise.S, noise.side, t);
}

AlgebraSdePath integrate_algebra_sde(const SdeCoefficientFn& coeffs,
                                     const Vec& x0, double t0, double T,
                                     double dt, const BrownianPath& path) {
  const int steps = step_count(t0, T, dt);
  require_path(path, dt, steps, -1);
  AlgebraSdePath out;
  out.times.reserve(steps + 1);
  out.states.reserve(steps + 1);
  out.times.push_back(t0);
  out.states.push_back(x0);
  Vec x = x0;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * dt;
    SdeCoefficients c;
    try {
      c = coeffs(t, x);
    } catch (const SingularityError&) {
      out.singular_time = t;
      return out;
    }
    if (c.diffusion.cols() > 0 && c.diffusion.cols() != path.dim())
      throw std::invalid_argument(
          "integrate_algebra_sde: diffusion columns != path dimension");
    x += c.drift * dt;
    if (c.diffusion.cols() > 0)
      x += c.diffusion * path.increments.row(k).transpose();
    if (!x.allFinite()) {
      out.singular_time = t;
      return out;
    }
    out.times.push_back(t0 + (k + 1) * dt);
    out.states.push_back(x);
  }
  return out;
}

SdeCoefficients error_sde_coefficients(const VectorFieldSpec& f_affine,
                                       const NoiseModel& noise,
                                       const Trajectory& xhat, const Vec& xi,
                                       double t, ErrorSide side) {
  if (noise.side != NoiseSide::lid)
    throw std::invalid_argument(
        "error_sde_coefficients: state noise must enter on the lid side");
  const GroupModel& m = *f_affine.model;
  if (f_affine.classification != Classification::affine &&
      f_affine.classification != Classification::linear) {
    ClassifyReport rep = check_affine(f_affine, 16, 1e-8);
    if (!rep.holds)
      throw std::invalid_argument(
          "error_sde_coefficients: f is not group-affine");
  }
  Mat A = linearize_at_identity(error_linear_part(f_affine, side), t);
  Mat channels = noise.S;
  if (side == ErrorSide::rie && !xhat.states.empty())
    channels = Ad(m, interpolate_geodesic(m, xhat, t)) * channels;
  return log_coordinate_coefficients(m, A, xi, channels, NoiseSide::lid, t);
}

SdeCoefficients first_order_error_sde(const VectorFieldSpec& f_affine,
                                      const NoiseModel& noise, const Vec& xi,
                                      double t, ErrorSide side,
                                      const Trajectory* xhat) {
  const GroupModel& m = *f_affine.model;
  Mat A = linearize_at_identity(error_linear_part(f_affine, side), t);
  SdeCoefficients out;
  out.drift = A * xi;
  out.diffusion = noise.S;
  if (side == ErrorSide::rie && xhat && !xhat->states.empty())
    out.diffusion = Ad(m, interpolate_geodesic(m, *xhat, t)) * out.diffusion;
  return out;
}

Mat lyapunov_propagate(const std::function<Mat(double)>& A,
                       const std::function<Mat(double)>& Q, const Mat& P0,
                       double t0, double T, double dt) {
  const int steps = step_count(t0, T, dt);
  const double h = (T - t0) / steps;
  auto rhs = [&](double t, const Mat& P) {
    Mat At = A(t);
    return Mat(At * P + P * At.transpose() + Q(t));
  };
  Mat P = P0;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    Mat k1 = rhs(t, P);
    Mat k2 = rhs(t + h / 2, Mat(P + h / 2 * k1));
    Mat k3 = rhs(t + h / 2, Mat(P + h / 2 * k2));
    Mat k4 = rhs(t + h, Mat(P + h * k3));
    P += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return P;
}

Mat lyapunov_propagate(const Mat& A, const Mat& Q, const Mat& P0, double t0,
                       double T, double dt) {
  return lyapunov_propagate([&A](double) { return A; },
                            [&Q](double) { return Q; }, P0, t0, T, dt);
}

void SdeEnsemble::recompute() {
  const int M = paths();
  const int d = M > 0 ? static_cast<int>(finals.front().size()) : 0;
  mean = Vec::Zero(d);
  cov = Mat::Zero(d, d);
  stderr_mean = Vec::Zero(d);
  if (M == 0) return;
  for (const Vec& z : finals) mean += z;
  mean /= M;
  if (M < 2) return;
  for (const Vec& z : finals) {
    Vec c = z - mean;
    cov += c * c.transpose();
  }
  cov /= (M - 1);
  stderr_mean = (cov.diagonal() / M).cwiseSqrt();
}

namespace {

// per-step data shared by every path at one step size
struct RouteGrid {
  int steps = 0;
  double dt = 0.0;
  std::vector<double> t;   // left endpoints
  std::vector<Vec> u;      // control samples at t_k
  std::vector<Mat> A;      // identity linearization at t_k
  std::vector<Mat> fI;     // error mode: f(I; u_k), empty in state mode
  std::vector<Mat> St;     // effective noise columns at t_k
};

RouteGrid build_grid(const McConfig& cfg, double dt) {
  const GroupModel& m = *cfg.model;
  RouteGrid g;
  g.steps = step_count(cfg.t0, cfg.T, dt);
  g.dt = (cfg.T - cfg.t0) / g.steps;
  g.t.resize(g.steps);
  g.u.resize(g.steps);
  g.A.resize(g.steps);
  g.St.resize(g.steps);
  const bool error_mode = cfg.mode == McMode::error;
  VectorFieldSpec lin = error_mode ? error_linear_part(cfg.f, cfg.side)
                                   : cfg.f;
  if (error_mode) g.fI.resize(g.steps);
  const Mat I = Mat::Identity(m.n, m.n);
  for (int k = 0; k < g.steps; ++k) {
    const double t = cfg.t0 + k * g.dt;
    g.t[k] = t;
    g.u[k] = cfg.f.u.eval(t);
    g.A[k] = linearize_at_identity(lin, t);
    if (error_mode) g.fI[k] = cfg.f.eval_with_u(g.u[k], t, I);
    Mat St = cfg.noise.S;
    if (error_mode && cfg.side == ErrorSide::rie && !cfg.xhat.states.empty())
      St = Ad(m, interpolate_geodesic(m, cfg.xhat, t)) * St;
    g.St[k] = std::move(St);
  }
  return g;
}

// group-route Euler-Maruyama through the exponential chart; the Stratonovich
// chart drift carries the pinning correction implicitly
bool run_group_path(const McConfig& cfg, const RouteGrid& g,
                    const BrownianPath& path, Vec& final_log) {
  const GroupModel& m = *cfg.model;
  const bool error_mode = cfg.mode == McMode::error;
  const bool rid_state = cfg.noise.side == NoiseSide::rid;
  Mat X = exp_m(m, cfg.x0);
  Mat drift(m.n, m.n), chart(m.n, m.n);
  for (int k = 0; k < g.steps; ++k) {
    if (error_mode) {
      drift = cfg.f.eval_with_u(g.u[k], g.t[k], X);
      if (cfg.side == ErrorSide::lie)
        drift.noalias() -= g.fI[k] * X;
      else
        drift.noalias() -= X * g.fI[k];
    } else {
      drift = cfg.f.eval_with_u(g.u[k], g.t[k], X);
    }
    Vec v;
    if (error_mode || !rid_state) {
      chart = X.partialPivLu().solve(drift);
      v = vee_raw(m, chart) * g.dt;
      if (g.St[k].cols() > 0)
        v.noalias() += g.St[k] * path.increments.row(k).transpose();
      X = X * exp_m(m, v);
    } else {
      chart = X.transpose().partialPivLu().solve(drift.transpose()).transpose();
      v = vee_raw(m, chart) * g.dt;
      if (g.St[k].cols() > 0)
        v.noalias() += g.St[k] * path.increments.row(k).transpose();
      X = exp_m(m, v) * X;
    }
    if (!X.allFinite()) return false;
  }
  try {
    final_log = log_m(m, X);
  } catch (const BranchError&) {
    return false;
  }
  return true;
}

bool run_algebra_path(const McConfig& cfg, const RouteGrid& g,
                      const BrownianPath& path, Vec& final_x) {
  const GroupModel& m = *cfg.model;
  const bool error_mode = cfg.mode == McMode::error;
  const NoiseSide cside =
      error_mode ? NoiseSide::lid : cfg.noise.side;
  Vec x = cfg.x0;
  Vec csum(m.d);
  for (int k = 0; k < g.steps; ++k) {
    Mat D = cside == NoiseSide::lid ? dexp_neg_fast(m, x)
                                    : dexp_neg_fast(m, Vec(-x));
    auto lu = D.partialPivLu();
    if (lu.rcond() < 1e-12) return false;
    Mat gamma = lu.solve(g.St[k]);
    csum.setZero();
    for (int c = 0; c < gamma.cols(); ++c)
      csum += c_correction_fast(m, x, Vec(gamma.col(c)), cside);
    Vec drift = g.A[k] * x;
    if (gamma.cols() > 0) drift -= 0.5 * lu.solve(csum);
    x += drift * g.dt;
    if (gamma.cols() > 0)
      x.noalias() += gamma * path.increments.row(k).transpose();
    if (!x.allFinite()) return false;
  }
  final_x = x;
  return true;
}

double fit_order(const std::vector<McStrongRow>& rows) {
  const int n = static_cast<int>(rows.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double lx = std::log(r.dt);
    const double ly = std::log(std::max(r.rms_gap, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

constexpr uint64_t kWeakGroupSalt = 0xA;
constexpr uint64_t kWeakAlgebraSalt = 0xB;

}  // namespace

McReport monte_carlo_compare(const McConfig& cfg) {
  if (!cfg.model) throw std::invalid_argument("monte_carlo_compare: no model");
  if (!cfg.noise.model)
    throw std::invalid_argument(
        "monte_carlo_compare: noise model missing (use NoiseModel::make)");
  if (cfg.mode == McMode::error && cfg.noise.side != NoiseSide::lid)
    throw std::invalid_argument(
        "monte_carlo_compare: error mode needs lid state noise");
  if (cfg.x0.size() != cfg.model->d)
    throw std::invalid_argument("monte_carlo_compare: x0 has wrong dimension");
  // zero-noise configs still draw (unused) scalar paths so both routes run
  const int chan = std::max(1, cfg.noise.channels());
  McReport rep;

  if (cfg.run_strong) {
    if (cfg.strong_paths < 2 || cfg.strong_dts.empty())
      throw std::invalid_argument("monte_carlo_compare: bad strong config");
    for (double dt : cfg.strong_dts) {
      RouteGrid g = build_grid(cfg, dt);
      std::vector<double> gap(cfg.strong_paths, -1.0);
      parallel_for(cfg.strong_paths, [&](int64_t p) {
        // shared increments pair the two routes pathwise
        BrownianPath path = BrownianPath::generate(
            cfg.master_seed, static_cast<uint64_t>(p), g.dt, g.steps, chan);
        Vec xg, xa;
        if (run_group_path(cfg, g, path, xg) &&
            run_algebra_path(cfg, g, path, xa))
          gap[p] = (xa - xg).norm();
      });
      McStrongRow row;
      row.dt = g.dt;
      double s1 = 0, s2 = 0;
      int kept = 0;
      for (double v : gap) {
        if (v < 0) {
          ++row.aborts;
          continue;
        }
        s1 += v * v;
        s2 += v * v * v * v;
        ++kept;
      }
      if (kept == 0)
        throw SingularityError("monte_carlo_compare: all paths aborted", dt);
      const double m2 = s1 / kept;
      row.rms_gap = std::sqrt(m2);
      // delta method on the mean of squared gaps
      const double var_m2 = std::max(0.0, s2 / kept - m2 * m2) / kept;
      row.stderr_gap = m2 > 0 ? 0.5 * std::sqrt(var_m2) / row.rms_gap : 0.0;
      rep.strong.push_back(row);
    }
    std::vector<McStrongRow> sorted = rep.strong;
    std::sort(sorted.begin(), sorted.end(),
              [](const McStrongRow& a, const McStrongRow& b) {
                return a.dt > b.dt;
              });
    rep.strong_monotone = true;
    for (size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i].rms_gap >= sorted[i - 1].rms_gap)
        rep.strong_monotone = false;
    rep.fitted_order = fit_order(rep.strong);
  }

  if (cfg.run_weak) {
    if (cfg.weak_paths < 2)
      throw std::invalid_argument("monte_carlo_compare: bad weak config");
    RouteGrid g = build_grid(cfg, cfg.weak_dt);
    McWeakReport weak;
    // independent streams: the weak test compares distributions, so the two
    // routes must not share increments
    std::vector<Vec> gfin(cfg.weak_paths), afin(cfg.weak_paths);
    parallel_for(cfg.weak_paths, [&](int64_t p) {
      BrownianPath gp =
          BrownianPath::generate(cfg.master_seed, static_cast<uint64_t>(p),
                                 g.dt, g.steps, chan, kWeakGroupSalt);
      Vec xg;
      if (run_group_path(cfg, g, gp, xg)) gfin[p] = std::move(xg);
      BrownianPath ap =
          BrownianPath::generate(cfg.master_seed, static_cast<uint64_t>(p),
                                 g.dt, g.steps, chan, kWeakAlgebraSalt);
      Vec xa;
      if (run_algebra_path(cfg, g, ap, xa)) afin[p] = std::move(xa);
    });
    for (int p = 0; p < cfg.weak_paths; ++p) {
      if (gfin[p].size() > 0)
        weak.group.finals.push_back(std::move(gfin[p]));
      else
        ++weak.group.excluded;
      if (afin[p].size() > 0)
        weak.algebra.finals.push_back(std::move(afin[p]));
      else
        ++weak.algebra.excluded;
    }
    weak.group.recompute();
    weak.algebra.recompute();
    weak.exclusion_fraction =
        double(weak.group.excluded + weak.algebra.excluded) /
        (2.0 * cfg.weak_paths);

    const int d = cfg.model->d;
    weak.mean_pass = true;
    for (int i = 0; i < d; ++i) {
      const double se = std::sqrt(std::pow(weak.group.stderr_mean[i], 2) +
                                  std::pow(weak.algebra.stderr_mean[i], 2));
      if (std::abs(weak.group.mean[i] - weak.algebra.mean[i]) > 3.0 * se) {
        weak.mean_pass = false;
        ++weak.mean_failures;
      }
    }
    // covariance stderr by the delta method: var of the centered products
    auto cov_se = [d](const SdeEnsemble& e) {
      Mat se = Mat::Zero(d, d);
      const int M = e.paths();
      if (M < 2) return se;
      for (const Vec& z : e.finals) {
        Vec c = z - e.mean;
        Mat prod = c * c.transpose() - e.cov;
        se += prod.cwiseProduct(prod);
      }
      return Mat((se / (double(M) * (M - 1))).cwiseSqrt());
    };
    Mat seg = cov_se(weak.group);
    Mat sea = cov_se(weak.algebra);
    weak.cov_pass = true;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const double se = std::hypot(seg(i, j), sea(i, j));
        if (std::abs(weak.group.cov(i, j) - weak.algebra.cov(i, j)) >
            3.0 * se) {
          weak.cov_pass = false;
          ++weak.cov_failures;
        }
      }
    rep.weak = std::move(weak);
  }
  return rep;
}

namespace {

void fmt(std::string& out, const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  out += buf;
}

}  // namespace

std::string McReport::to_text() const {
  std::string out;
  out += "strong comparison\n";
  out += "dt rms_gap stderr aborts\n";
  for (const auto& r : strong) {
    fmt(out, "%.17g", r.dt);
    out += ' ';
    fmt(out, "%.17g", r.rms_gap);
    out += ' ';
    fmt(out, "%.17g", r.stderr_gap);
    out += ' ';
    out += std::to_string(r.aborts);
    out += '\n';
  }
  if (!strong.empty()) {
    out += "fitted_order ";
    fmt(out, "%.17g", fitted_order);
    out += "\nmonotone ";
    out += strong_monotone ? "yes" : "no";
    out += '\n';
  }
  if (weak) {
    out += "weak comparison\n";
    const int d = static_cast<int>(weak->group.mean.size());
    out += "component mean_group mean_algebra se_group se_algebra\n";
    for (int i = 0; i < d; ++i) {
      out += std::to_string(i + 1);
      out += ' ';
      fmt(out, "%.17g", weak->group.mean[i]);
      out += ' ';
      fmt(out, "%.17g", weak->algebra.mean[i]);
      out += ' ';
      fmt(out, "%.17g", weak->group.stderr_mean[i]);
      out += ' ';
      fmt(out, "%.17g", weak->algebra.stderr_mean[i]);
      out += '\n';
    }
    out += "mean_pass ";
    out += weak->mean_pass ? "yes" : "no";
    out += "\ncov_pass ";
    out += weak->cov_pass ? "yes" : "no";
    out += "\nmean_failures " + std::to_string(weak->mean_failures);
    out += "\ncov_failures " + std::to_string(weak->cov_failures);
    out += "\nexcluded_group " + std::to_string(weak->group.excluded);
    out += "\nexcluded_algebra " + std::to_string(weak->algebra.excluded);
    out += "\nexclusion_fraction ";
    fmt(out, "%.17g", weak->exclusion_fraction);
    out += '\n';
  }
  return out;
}

}  // namespace errdyn
