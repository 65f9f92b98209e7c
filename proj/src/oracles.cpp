#include "errdyn/oracles.hpp"

#include <cmath>

#include "errdyn/threads.hpp"

namespace errdyn {

OracleReport OracleReport::compare(std::string quantity, double reference,
                                   double candidate, double tolerance) {
  OracleReport r;
  r.quantity = std::move(quantity);
  r.reference = reference;
  r.candidate = candidate;
  r.abs_error = std::abs(reference - candidate);
  r.rel_error = r.abs_error / std::max(std::abs(reference), 1e-300);
  r.tolerance = tolerance;
  r.pass = r.abs_error <= tolerance;
  return r;
}

Vec oracle_c_via_dexp_derivative(const GroupModel& m, const Vec& x,
                                 const Vec& gamma, NoiseSide side) {
  const double h = 1e-5;
  const int order = 30;
  const double s = side == NoiseSide::lid ? -1.0 : 1.0;
  Mat Dp = dexp_m(m, Vec(s * (x + h * gamma)), order);
  Mat Dm = dexp_m(m, Vec(s * (x - h * gamma)), order);
  return ((Dp - Dm) / (2.0 * h)) * gamma;
}

DriftEstimate oracle_short_time_drift(const VectorFieldSpec& f_linear,
                                      const NoiseModel& noise, const Vec& x,
                                      double dtau, int paths,
                                      uint64_t master_seed, int substeps) {
  if (dtau <= 0.0 || dtau > 1e-3)
    throw std::invalid_argument("oracle_short_time_drift: need 0 < dtau <= 1e-3");
  if (paths < 10000)
    throw std::invalid_argument("oracle_short_time_drift: need >= 1e4 paths");
  if (substeps < 1)
    throw std::invalid_argument("oracle_short_time_drift: substeps >= 1");
  const GroupModel& m = *f_linear.model;
  const double h = dtau / substeps;
  const int chan = std::max(1, noise.channels());
  const Mat X0 = exp_m(m, x);
  // the drift being estimated belongs to the Stratonovich group SDE, so the
  // Ito stepper gets the pinning-corrected field
  const VectorFieldSpec f_ito = strat_to_ito(f_linear, noise);
  constexpr uint64_t salt = 0xD51F7;
  std::vector<Vec> delta(paths);
  parallel_for(paths, [&](int64_t p) {
    BrownianPath path = BrownianPath::generate(
        master_seed, static_cast<uint64_t>(p), h, substeps, chan, salt);
    Trajectory traj = integrate_group_sde(f_ito, noise, X0, 0.0, dtau, h, path,
                                          SdeScheme::em_ito);
    delta[p] = Vec(log_m(m, traj.states.back()) - x);
  });
  DriftEstimate est;
  est.paths = paths;
  Vec mean = Vec::Zero(m.d);
  for (const Vec& z : delta) mean += z;
  mean /= paths;
  Vec var = Vec::Zero(m.d);
  for (const Vec& z : delta) var += (z - mean).cwiseAbs2();
  var /= (paths - 1);
  est.drift = mean / dtau;
  est.stderr_drift = (var / paths).cwiseSqrt() / dtau;
  return est;
}

Mat oracle_dadmn_fd(const GroupModel& m, const Vec& x, const Vec& g, int n) {
  if (n < 1) throw std::invalid_argument("oracle_dadmn_fd: n >= 1");
  const double h = 1e-5;
  Mat Ap(m.d, m.d), Am(m.d, m.d);
  adm_into(m, Vec(x + h * g), Ap);
  adm_into(m, Vec(x - h * g), Am);
  Mat Pp = Mat::Identity(m.d, m.d);
  Mat Pm = Mat::Identity(m.d, m.d);
  for (int i = 0; i < n; ++i) {
    Pp = Pp * Ap;
    Pm = Pm * Am;
  }
  return (Pp - Pm) / (2.0 * h);
}

}  // namespace errdyn
