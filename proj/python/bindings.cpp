// Python bindings for the group-system error-dynamics library. Signals are
// restricted to the built-in constructors so every hot loop stays free of
// interpreter callbacks; long-running entry points release the GIL.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "errdyn/det.hpp"
#include "errdyn/oracles.hpp"
#include "errdyn/sde.hpp"
#include "errdyn/sen3.hpp"
#include "errdyn/threads.hpp"

namespace py = pybind11;
using namespace errdyn;

namespace {

std::vector<double> arr4(const double (&a)[4]) {
  return std::vector<double>(a, a + 4);
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::linear: return "linear";
    case Classification::affine: return "affine";
    case Classification::neither: return "neither";
    default: return "unknown";
  }
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "dynamical systems and invariant error dynamics on matrix Lie "
              "groups";

  // ---- enums ----
  py::enum_<NoiseSide>(mod, "NoiseSide")
      .value("lid", NoiseSide::lid)
      .value("rid", NoiseSide::rid);
  py::enum_<ErrorSide>(mod, "ErrorSide")
      .value("lie", ErrorSide::lie)
      .value("rie", ErrorSide::rie);
  py::enum_<DisturbanceSide>(mod, "DisturbanceSide")
      .value("left_invariant", DisturbanceSide::left_invariant)
      .value("right_invariant", DisturbanceSide::right_invariant);
  py::enum_<OdeMethod>(mod, "OdeMethod")
      .value("lie_euler", OdeMethod::lie_euler)
      .value("rkmk4", OdeMethod::rkmk4);
  py::enum_<SdeScheme>(mod, "SdeScheme")
      .value("em_ito", SdeScheme::em_ito)
      .value("heun_strat", SdeScheme::heun_strat);
  py::enum_<McMode>(mod, "McMode")
      .value("state", McMode::state)
      .value("error", McMode::error);
  py::enum_<CombineRule>(mod, "CombineRule")
      .value("linear_linear", CombineRule::linear_linear)
      .value("affine_affine", CombineRule::affine_affine)
      .value("linear_affine", CombineRule::linear_affine);

  // ---- model ----
  py::class_<GroupModel, std::shared_ptr<GroupModel>>(mod, "Model")
      .def_readonly("name", &GroupModel::name)
      .def_readonly("n", &GroupModel::n)
      .def_readonly("d", &GroupModel::d)
      .def_readonly("sen3_N", &GroupModel::sen3_N)
      .def("validate", &GroupModel::validate, py::arg("closure_tol") = 1e-12)
      .def("membership_residual", &GroupModel::membership_residual)
      .def("__repr__", [](const GroupModel& m) {
        return "<Model " + m.name + " n=" + std::to_string(m.n) +
               " d=" + std::to_string(m.d) + ">";
      });
  mod.def("make_sen3", &make_sen3, py::arg("N"));
  mod.def("make_so3", &make_so3);
  mod.def("make_generic_model", &make_generic_model, py::arg("name"),
          py::arg("n"), py::arg("basis"));

  // ---- algebra ----
  mod.def("hat",
          [](const ModelPtr& m, const Vec& v) { return hat(*m, v); });
  mod.def("vee",
          [](const ModelPtr& m, const Mat& mat, double tol) {
            return vee(*m, mat, tol);
          },
          py::arg("model"), py::arg("mat"), py::arg("tol") = 1e-9);
  mod.def("adm", [](const ModelPtr& m, const Vec& v) {
    Mat out(m->d, m->d);
    adm_into(*m, v, out);
    return out;
  });
  mod.def("exp_m",
          [](const ModelPtr& m, const Vec& v) { return exp_m(*m, v); });
  mod.def("log_m",
          [](const ModelPtr& m, const Mat& X) { return log_m(*m, X); });
  mod.def("Ad", [](const ModelPtr& m, const Mat& X) { return Ad(*m, X); });
  mod.def("dexp_m",
          [](const ModelPtr& m, const Vec& v, int order) {
            return dexp_m(*m, v, order);
          },
          py::arg("model"), py::arg("v"), py::arg("order") = 0);
  mod.def("dexp_m_inv",
          [](const ModelPtr& m, const Vec& v) { return dexp_m_inv(*m, v); });
  mod.def("dadmn",
          [](const ModelPtr& m, const Vec& x, const Vec& g, int n) {
            return dadmn(*m, x, g, n);
          });
  mod.def("c_correction_series",
          [](const ModelPtr& m, const Vec& x, const Vec& g, NoiseSide side,
             int order) { return c_correction_series(*m, x, g, side, order); },
          py::arg("model"), py::arg("x"), py::arg("gamma"), py::arg("side"),
          py::arg("order") = 0);
  mod.def("c_correction_fast",
          [](const ModelPtr& m, const Vec& x, const Vec& g, NoiseSide side) {
            return c_correction_fast(*m, x, g, side);
          });
  mod.def("bch_truncated",
          [](const ModelPtr& m, const Vec& a, const Vec& b, int order) {
            return bch_truncated(*m, a, b, order);
          });
  mod.def("dexp_neg_fast", [](const ModelPtr& m, const Vec& v) {
    return dexp_neg_fast(*m, v);
  });
  mod.def("dexp_neg_inv_fast", [](const ModelPtr& m, const Vec& v) {
    return dexp_neg_inv_fast(*m, v);
  });

  // ---- SE_N(3) closed forms ----
  py::class_<JacobianCoefficients>(mod, "JacobianCoefficients")
      .def_readonly("theta", &JacobianCoefficients::theta)
      .def_readonly("theta_dir", &JacobianCoefficients::theta_dir)
      .def_property_readonly(
          "beta", [](const JacobianCoefficients& j) { return arr4(j.beta); })
      .def_property_readonly(
          "beta_prime",
          [](const JacobianCoefficients& j) { return arr4(j.beta_prime); })
      .def_property_readonly(
          "psi", [](const JacobianCoefficients& j) { return arr4(j.psi); });
  mod.def("sen3_jacobian_coefficients",
          py::overload_cast<double>(&sen3_jacobian_coefficients));
  mod.def("sen3_exp", [](const ModelPtr& m, const Vec& v) {
    return sen3_exp(*m, v);
  });
  mod.def("sen3_log", [](const ModelPtr& m, const Mat& X) {
    return sen3_log(*m, X);
  });
  mod.def("sen3_dexp_right", [](const ModelPtr& m, const Vec& xi) {
    return sen3_dexp_right(*m, xi);
  });
  mod.def("sen3_minimal_polynomial_residual",
          [](const ModelPtr& m, const Vec& xi) {
            return sen3_minimal_polynomial_residual(*m, xi);
          });
  mod.def("sen3_c_correction",
          [](const ModelPtr& m, const Vec& xi, const Vec& g) {
            return sen3_c_correction(*m, xi, g);
          });

  // ---- signals and fields ----
  py::class_<ControlSignal>(mod, "ControlSignal")
      .def_static("none", &ControlSignal::none)
      .def_static("constant", &ControlSignal::constant)
      .def_static("piecewise", &ControlSignal::piecewise, py::arg("times"),
                  py::arg("values"))
      .def_static("sinusoid", &ControlSignal::sinusoid, py::arg("amplitude"),
                  py::arg("frequency"), py::arg("phase") = 0.0)
      .def_readonly("piecewise_constant", &ControlSignal::piecewise_constant)
      .def_readonly("identically_zero", &ControlSignal::identically_zero)
      .def("__call__",
           [](const ControlSignal& s, double t) { return s.eval(t); });

  py::class_<VectorFieldSpec>(mod, "VectorField")
      .def_readonly("model", &VectorFieldSpec::model)
      .def_readonly("tangent", &VectorFieldSpec::tangent)
      .def_property_readonly("classification",
                             [](const VectorFieldSpec& f) {
                               return classification_name(f.classification);
                             })
      .def("eval", &VectorFieldSpec::eval, py::arg("t"), py::arg("X"))
      .def_static("left_invariant", &VectorFieldSpec::left_invariant)
      .def_static("right_invariant", &VectorFieldSpec::right_invariant)
      .def_static("commutator", &VectorFieldSpec::commutator)
      .def_static("zero", &VectorFieldSpec::zero);

  py::class_<ClassifyReport>(mod, "ClassifyReport")
      .def_readonly("holds", &ClassifyReport::holds)
      .def_readonly("max_residual", &ClassifyReport::max_residual);
  mod.def("check_linear", &check_linear, py::arg("f"), py::arg("samples") = 64,
          py::arg("tol") = 1e-9, py::arg("t") = 0.0, py::arg("seed") = 12345);
  mod.def("check_affine", &check_affine, py::arg("f"), py::arg("samples") = 64,
          py::arg("tol") = 1e-9, py::arg("t") = 0.0, py::arg("seed") = 12345);
  mod.def("affine_to_linear", &affine_to_linear);
  mod.def("error_linear_part", &error_linear_part);
  mod.def("combine", &combine);
  mod.def("linearize_at_identity", &linearize_at_identity, py::arg("f"),
          py::arg("t") = 0.0);
  mod.def("check_lemma1",
          [](const ModelPtr& m, const Mat& A, int samples, uint64_t seed) {
            return check_lemma1(m, A, samples, seed);
          },
          py::arg("model"), py::arg("A"), py::arg("samples") = 64,
          py::arg("seed") = 12345);

  // ---- deterministic propagation ----
  py::class_<DisturbanceSignal>(mod, "DisturbanceSignal")
      .def(py::init([](ControlSignal w, DisturbanceSide side) {
             DisturbanceSignal d;
             d.w = std::move(w);
             d.side = side;
             return d;
           }),
           py::arg("w"), py::arg("side") = DisturbanceSide::left_invariant)
      .def_readonly("side", &DisturbanceSignal::side);

  py::class_<Trajectory>(mod, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("states", &Trajectory::states)
      .def_readonly("integrator", &Trajectory::integrator)
      .def_readonly("dt", &Trajectory::dt)
      .def("steps", &Trajectory::steps);

  py::class_<ErrorTrajectory>(mod, "ErrorTrajectory")
      .def_readonly("times", &ErrorTrajectory::times)
      .def_readonly("xi", &ErrorTrajectory::xi)
      .def_readonly("eta", &ErrorTrajectory::eta)
      .def_readonly("side", &ErrorTrajectory::side)
      .def_readonly("singular_time", &ErrorTrajectory::singular_time);

  mod.def("integrate_group_ode", &integrate_group_ode, py::arg("f"),
          py::arg("X0"), py::arg("t0"), py::arg("T"), py::arg("dt"),
          py::arg("method") = OdeMethod::rkmk4,
          py::call_guard<py::gil_scoped_release>());
  mod.def("invariant_error",
          [](const ModelPtr&, const Mat& X, const Mat& Xhat, ErrorSide side) {
            return invariant_error(X, Xhat, side);
          },
          py::arg("model"), py::arg("X"), py::arg("Xhat"), py::arg("side"));
  mod.def("interpolate_geodesic",
          [](const ModelPtr& m, const Trajectory& tr, double t) {
            return interpolate_geodesic(*m, tr, t);
          });
  mod.def("integrate_error_ode_algebra", &integrate_error_ode_algebra,
          py::arg("f"), py::arg("side"), py::arg("w"), py::arg("xhat"),
          py::arg("xi0"), py::arg("dt"),
          py::call_guard<py::gil_scoped_release>());
  mod.def("integrate_error_ode_group", &integrate_error_ode_group,
          py::arg("f"), py::arg("side"), py::arg("w"), py::arg("xhat"),
          py::arg("xi0"), py::arg("dt"),
          py::call_guard<py::gil_scoped_release>());

  // ---- randomness ----
  mod.def("derive_seed", &derive_seed, py::arg("master_seed"),
          py::arg("path_index"), py::arg("salt"));
  py::class_<BrownianPath>(mod, "BrownianPath")
      .def_static("generate", &BrownianPath::generate, py::arg("master_seed"),
                  py::arg("path_index"), py::arg("dt"), py::arg("steps"),
                  py::arg("d"), py::arg("salt") = 0)
      .def_readonly("seed", &BrownianPath::seed)
      .def_readonly("dt", &BrownianPath::dt)
      .def_readonly("increments", &BrownianPath::increments)
      .def("steps", &BrownianPath::steps)
      .def("dim", &BrownianPath::dim);
  mod.def("thread_budget", &thread_budget);

  // ---- stochastic propagation ----
  py::class_<NoiseModel>(mod, "NoiseModel")
      .def_static("make", &NoiseModel::make, py::arg("model"), py::arg("side"),
                  py::arg("S"))
      .def_static("isotropic", &NoiseModel::isotropic, py::arg("model"),
                  py::arg("side"), py::arg("sigma"))
      .def_readonly("side", &NoiseModel::side)
      .def_readonly("S", &NoiseModel::S)
      .def_readonly("pinning", &NoiseModel::pinning)
      .def_readonly("covariance", &NoiseModel::covariance)
      .def("channels", &NoiseModel::channels)
      .def("is_zero", &NoiseModel::is_zero);
  mod.def("strat_to_ito", &strat_to_ito);
  mod.def("integrate_group_sde", &integrate_group_sde, py::arg("f"),
          py::arg("noise"), py::arg("X0"), py::arg("t0"), py::arg("T"),
          py::arg("dt"), py::arg("path"),
          py::arg("scheme") = SdeScheme::em_ito,
          py::call_guard<py::gil_scoped_release>());

  py::class_<SdeCoefficients>(mod, "SdeCoefficients")
      .def_readonly("drift", &SdeCoefficients::drift)
      .def_readonly("diffusion", &SdeCoefficients::diffusion);
  mod.def("algebra_sde_coefficients", &algebra_sde_coefficients,
          py::arg("f_linear"), py::arg("noise"), py::arg("x"), py::arg("t"));
  py::class_<AlgebraSdePath>(mod, "AlgebraSdePath")
      .def_readonly("times", &AlgebraSdePath::times)
      .def_readonly("states", &AlgebraSdePath::states)
      .def_readonly("singular_time", &AlgebraSdePath::singular_time);
  mod.def("integrate_algebra_sde", &integrate_algebra_sde, py::arg("coeffs"),
          py::arg("x0"), py::arg("t0"), py::arg("T"), py::arg("dt"),
          py::arg("path"));
  mod.def("error_sde_coefficients", &error_sde_coefficients,
          py::arg("f_affine"), py::arg("noise"), py::arg("xhat"),
          py::arg("xi"), py::arg("t"), py::arg("side"));
  mod.def("first_order_error_sde",
          [](const VectorFieldSpec& f, const NoiseModel& noise, const Vec& xi,
             double t, ErrorSide side, std::optional<Trajectory> xhat) {
            return first_order_error_sde(f, noise, xi, t, side,
                                         xhat ? &*xhat : nullptr);
          },
          py::arg("f_affine"), py::arg("noise"), py::arg("xi"), py::arg("t"),
          py::arg("side") = ErrorSide::lie, py::arg("xhat") = std::nullopt);
  mod.def("lyapunov_propagate",
          py::overload_cast<const Mat&, const Mat&, const Mat&, double, double,
                            double>(&lyapunov_propagate),
          py::arg("A"), py::arg("Q"), py::arg("P0"), py::arg("t0"),
          py::arg("T"), py::arg("dt"));

  // ---- ensemble comparison ----
  py::class_<SdeEnsemble>(mod, "SdeEnsemble")
      .def_readonly("finals", &SdeEnsemble::finals)
      .def_readonly("excluded", &SdeEnsemble::excluded)
      .def_readonly("mean", &SdeEnsemble::mean)
      .def_readonly("cov", &SdeEnsemble::cov)
      .def_readonly("stderr_mean", &SdeEnsemble::stderr_mean)
      .def("paths", &SdeEnsemble::paths);
  py::class_<McConfig>(mod, "McConfig")
      .def(py::init<>())
      .def_readwrite("model", &McConfig::model)
      .def_readwrite("f", &McConfig::f)
      .def_readwrite("mode", &McConfig::mode)
      .def_readwrite("side", &McConfig::side)
      .def_readwrite("xhat", &McConfig::xhat)
      .def_readwrite("noise", &McConfig::noise)
      .def_readwrite("x0", &McConfig::x0)
      .def_readwrite("t0", &McConfig::t0)
      .def_readwrite("T", &McConfig::T)
      .def_readwrite("run_strong", &McConfig::run_strong)
      .def_readwrite("strong_dts", &McConfig::strong_dts)
      .def_readwrite("strong_paths", &McConfig::strong_paths)
      .def_readwrite("run_weak", &McConfig::run_weak)
      .def_readwrite("weak_dt", &McConfig::weak_dt)
      .def_readwrite("weak_paths", &McConfig::weak_paths)
      .def_readwrite("master_seed", &McConfig::master_seed);
  py::class_<McStrongRow>(mod, "McStrongRow")
      .def_readonly("dt", &McStrongRow::dt)
      .def_readonly("rms_gap", &McStrongRow::rms_gap)
      .def_readonly("stderr_gap", &McStrongRow::stderr_gap)
      .def_readonly("aborts", &McStrongRow::aborts);
  py::class_<McWeakReport>(mod, "McWeakReport")
      .def_readonly("group", &McWeakReport::group)
      .def_readonly("algebra", &McWeakReport::algebra)
      .def_readonly("mean_pass", &McWeakReport::mean_pass)
      .def_readonly("cov_pass", &McWeakReport::cov_pass)
      .def_readonly("mean_failures", &McWeakReport::mean_failures)
      .def_readonly("cov_failures", &McWeakReport::cov_failures)
      .def_readonly("exclusion_fraction", &McWeakReport::exclusion_fraction);
  py::class_<McReport>(mod, "McReport")
      .def_readonly("strong", &McReport::strong)
      .def_readonly("fitted_order", &McReport::fitted_order)
      .def_readonly("strong_monotone", &McReport::strong_monotone)
      .def_readonly("weak", &McReport::weak)
      .def("to_text", &McReport::to_text);
  mod.def("monte_carlo_compare", &monte_carlo_compare, py::arg("cfg"),
          py::call_guard<py::gil_scoped_release>());

  // ---- oracles ----
  py::class_<OracleReport>(mod, "OracleReport")
      .def_readonly("quantity", &OracleReport::quantity)
      .def_readonly("reference", &OracleReport::reference)
      .def_readonly("candidate", &OracleReport::candidate)
      .def_readonly("abs_error", &OracleReport::abs_error)
      .def_readonly("rel_error", &OracleReport::rel_error)
      .def_readonly("tolerance", &OracleReport::tolerance)
      .def_readonly("passed", &OracleReport::pass)
      .def_static("compare", &OracleReport::compare);
  mod.def("oracle_c_via_dexp_derivative",
          [](const ModelPtr& m, const Vec& x, const Vec& g, NoiseSide side) {
            return oracle_c_via_dexp_derivative(*m, x, g, side);
          });
  py::class_<DriftEstimate>(mod, "DriftEstimate")
      .def_readonly("drift", &DriftEstimate::drift)
      .def_readonly("stderr_drift", &DriftEstimate::stderr_drift)
      .def_readonly("paths", &DriftEstimate::paths);
  mod.def("oracle_short_time_drift", &oracle_short_time_drift,
          py::arg("f_linear"), py::arg("noise"), py::arg("x"), py::arg("dtau"),
          py::arg("paths"), py::arg("master_seed") = 0,
          py::arg("substeps") = 8, py::call_guard<py::gil_scoped_release>());
  mod.def("oracle_dadmn_fd",
          [](const ModelPtr& m, const Vec& x, const Vec& g, int n) {
            return oracle_dadmn_fd(*m, x, g, n);
          });

  py::register_exception<SingularityError>(mod, "SingularityError",
                                           PyExc_ArithmeticError);
  py::register_exception<BranchError>(mod, "BranchError",
                                      PyExc_ArithmeticError);
}
