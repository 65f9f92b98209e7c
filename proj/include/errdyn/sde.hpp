#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "errdyn/det.hpp"
#include "errdyn/rng.hpp"
#include "errdyn/systems.hpp"

namespace errdyn {

// Invariant driving noise. Column k of S is the strength vector s_k of one
// Brownian channel; side says whether s_k^ multiplies the state from the
// right (lid, X s_k^) or the left (rid, s_k^ X).
struct NoiseModel {
  ModelPtr model;
  NoiseSide side = NoiseSide::lid;
  Mat S;           // d x m, one column per channel
  Mat pinning;     // sum_k (s_k^)^2, cached at construction
  Mat covariance;  // S S^T

  int channels() const { return static_cast<int>(S.cols()); }
  bool is_zero() const;
  // recomputes sum_k (s_k^)^2 from S; the cache must match to 1e-14
  Mat recompute_pinning() const;

  static NoiseModel make(ModelPtr model, NoiseSide side, Mat S);
  static NoiseModel isotropic(ModelPtr model, NoiseSide side, double sigma);
};

// Adds the Ito correction 1/2 X P (lid) or 1/2 P X (rid), P = sum_k (s_k^)^2.
// The result is not algebra-valued pointwise, so the returned field has
// tangent = false; with S = 0 the input is returned unchanged.
VectorFieldSpec strat_to_ito(const VectorFieldSpec& f, const NoiseModel& noise);

enum class SdeScheme { em_ito, heun_strat };

// One-step exponential schemes driven by path.increments. em_ito reads f as
// the Ito drift and removes the pinning part inside the chart; heun_strat
// reads f as the Stratonovich drift and averages drift and noise columns
// between the two chart endpoints. Both keep every state on the group by
// construction. Throws std::invalid_argument when the chart increment fails
// to be algebra-valued, which is how a drift of the wrong convention shows
// up.
Trajectory integrate_group_sde(const VectorFieldSpec& f,
                               const NoiseModel& noise, const Mat& X0,
                               double t0, double T, double dt,
                               const BrownianPath& path, SdeScheme scheme);

struct SdeCoefficients {
  Vec drift;      // length d
  Mat diffusion;  // d x m, columns pair with the Brownian channels
};

using SdeCoefficientFn = std::function<SdeCoefficients(double, const Vec&)>;

// Ito coefficients of x = log_m(X) when X solves the group SDE with linear
// drift f and the given invariant noise:
//   lid: D = dexp_m(-x), gamma_k = D^-1 s_k, alternating-sign corrections
//   rid: D = dexp_m(+x), gamma_k = D^-1 s_k, positive-sign corrections
//   drift = A_t x - 1/2 sum_k D^-1 C(x, gamma_k),  diffusion column k = gamma_k
// A_t is the identity linearization of f at time t. Throws SingularityError
// when D is numerically singular.
SdeCoefficients algebra_sde_coefficients(const VectorFieldSpec& f_linear,
                                         const NoiseModel& noise, const Vec& x,
                                         double t);

struct AlgebraSdePath {
  std::vector<double> times;
  std::vector<Vec> states;
  // set when the run stopped early at a dexp singularity or non-finite state
  std::optional<double> singular_time;
};

// Euler-Maruyama in R^d with coefficients sampled at the left endpoint of
// each step. path.dt must equal dt and the column count of the diffusion
// must match path.dim().
AlgebraSdePath integrate_algebra_sde(const SdeCoefficientFn& coeffs,
                                     const Vec& x0, double t0, double T,
                                     double dt, const BrownianPath& path);

// Ito coefficients of the logarithmic invariant error xi when the state
// carries lid noise. The effective channels are s_k for lie errors and
// Ad(Xhat_t) s_k for rie errors; both sides then run through the lid form
// above with A_t taken from the side-matched linear reduction of f.
// Rejects rid state noise.
SdeCoefficients error_sde_coefficients(const VectorFieldSpec& f_affine,
                                       const NoiseModel& noise,
                                       const Trajectory& xhat, const Vec& xi,
                                       double t, ErrorSide side);

// Small-error truncation: drift A_t xi, diffusion S (rie with a reference
// trajectory supplied conjugates the columns by Ad(Xhat_t)).
SdeCoefficients first_order_error_sde(const VectorFieldSpec& f_affine,
                                      const NoiseModel& noise, const Vec& xi,
                                      double t, ErrorSide side = ErrorSide::lie,
                                      const Trajectory* xhat = nullptr);

// RK4 on P' = A(t) P + P A(t)^T + Q(t); companion of the truncation above
// with Q = S S^T.
Mat lyapunov_propagate(const std::function<Mat(double)>& A,
                       const std::function<Mat(double)>& Q, const Mat& P0,
                       double t0, double T, double dt);
Mat lyapunov_propagate(const Mat& A, const Mat& Q, const Mat& P0, double t0,
                       double T, double dt);

// Final-time ensemble with moments recomputable from the stored samples.
struct SdeEnsemble {
  std::vector<Vec> finals;
  int excluded = 0;  // paths dropped at singularities, kept out of moments
  Vec mean;
  Mat cov;
  Vec stderr_mean;

  int paths() const { return static_cast<int>(finals.size()); }
  void recompute();
};

enum class McMode { state, error };

struct McConfig {
  ModelPtr model;
  VectorFieldSpec f;      // linear drift for state mode, affine for error mode
  McMode mode = McMode::state;
  ErrorSide side = ErrorSide::lie;  // error mode only
  Trajectory xhat;                  // error mode; may be empty for lie errors
  NoiseModel noise;
  Vec x0;  // algebra-side start; group route starts at exp_m(x0)
  double t0 = 0.0;
  double T = 0.5;

  bool run_strong = true;
  std::vector<double> strong_dts{4e-3, 2e-3, 1e-3};
  int strong_paths = 64;

  bool run_weak = false;
  double weak_dt = 1e-3;
  int weak_paths = 10000;

  uint64_t master_seed = 0;
};

struct McStrongRow {
  double dt = 0.0;
  double rms_gap = 0.0;  // rms over paths of |x_alg(T) - log(X_group(T))|
  double stderr_gap = 0.0;
  int aborts = 0;  // paths excluded on either route
};

struct McWeakReport {
  SdeEnsemble group;
  SdeEnsemble algebra;
  bool mean_pass = false;  // every component within 3 combined stderr
  bool cov_pass = false;   // every entry within 3 delta-method stderr
  int mean_failures = 0;
  int cov_failures = 0;
  double exclusion_fraction = 0.0;
};

struct McReport {
  std::vector<McStrongRow> strong;
  double fitted_order = 0.0;  // log-log slope across strong_dts
  bool strong_monotone = false;
  std::optional<McWeakReport> weak;

  // deterministic rendering, byte-stable for a fixed config and seed
  std::string to_text() const;
};

// Paired two-route comparison. Strong rows share Brownian increments between
// the group and algebra routes path by path; the weak block draws the two
// ensembles from independent streams of the same master seed. Paths run in
// parallel into per-index slots, so results do not depend on the thread
// budget.
McReport monte_carlo_compare(const McConfig& cfg);

}  // namespace errdyn
