#pragma once

#include <string>

#include "errdyn/sde.hpp"

namespace errdyn {

// One brute-force comparison. reference comes from the slow independent
// route, candidate from the implementation under test.
struct OracleReport {
  std::string quantity;
  double reference = 0.0;
  double candidate = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  static OracleReport compare(std::string quantity, double reference,
                              double candidate, double tolerance);
};

// Correction-series reference: central difference of the order-30 dexp
// series along gamma, step 1e-5, applied to gamma. lid differentiates
// dexp_m(-(x+h*gamma)), rid dexp_m(+(x+h*gamma)).
Vec oracle_c_via_dexp_derivative(const GroupModel& m, const Vec& x,
                                 const Vec& gamma, NoiseSide side);

struct DriftEstimate {
  Vec drift;        // E[log_m(X_dtau) - x] / dtau
  Vec stderr_drift;  // componentwise standard error of the estimate
  int paths = 0;
};

// Empirical short-time drift of the group SDE started at exp_m(x); the
// horizon is split into substeps internal chart steps. Meant for a 3 sigma
// comparison against algebra_sde_coefficients.
DriftEstimate oracle_short_time_drift(const VectorFieldSpec& f_linear,
                                      const NoiseModel& noise, const Vec& x,
                                      double dtau, int paths,
                                      uint64_t master_seed = 0,
                                      int substeps = 8);

// (adm(x + h g)^n - adm(x - h g)^n) / (2h) with h = 1e-5
Mat oracle_dadmn_fd(const GroupModel& m, const Vec& x, const Vec& g, int n);

}  // namespace errdyn
