// lie-errdyn: scenario runner for group-system checks, invariant-error
// propagation, and two-route SDE ensembles. Configs are JSON; all outputs
// are deterministic for a fixed config and seed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "errdyn/det.hpp"
#include "errdyn/oracles.hpp"
#include "errdyn/sde.hpp"
#include "errdyn/sen3.hpp"
#include "json.hpp"

using nlohmann::json;
using namespace errdyn;

namespace {

// exit-code contract: 0 pass, 1 usage/config, 2 check failure, 3 numerical
enum ExitCode { exit_ok = 0, exit_config = 1, exit_check = 2, exit_numeric = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// command-line overrides applied on top of the config file
struct Overrides {
  std::optional<uint64_t> seed;
  std::optional<int> paths;
  std::optional<double> dt;
  std::string out_dir = ".";
};

Vec parse_vec(const json& j, const std::string& key, int want) {
  if (!j.is_array())
    throw ConfigError(key + ": expected an array of numbers");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ConfigError(key + "[" + std::to_string(i) + "]: expected number");
    v[i] = j[i].get<double>();
  }
  if (want >= 0 && v.size() != want)
    throw ConfigError(key + ": expected length " + std::to_string(want) +
                      ", got " + std::to_string(v.size()));
  return v;
}

ModelPtr parse_group(const json& cfg) {
  if (!cfg.contains("group")) throw ConfigError("group: missing");
  const json& g = cfg["group"];
  if (g.is_string()) {
    std::string s = g.get<std::string>();
    if (s == "SO3") return make_sen3(0);
    throw ConfigError("group: unknown name '" + s + "' (use SO3 or an object)");
  }
  if (g.is_object() && g.value("type", "") == "SEN3") {
    if (!g.contains("N") || !g["N"].is_number_integer())
      throw ConfigError("group.N: integer required for SEN3");
    int N = g["N"].get<int>();
    if (N < 0 || N > 8) throw ConfigError("group.N: must be in 0..8");
    return make_sen3(N);
  }
  throw ConfigError("group: expected \"SO3\" or {\"type\":\"SEN3\",\"N\":n}");
}

ControlSignal parse_signal(const json& j, const std::string& key, int d) {
  if (!j.is_object() || !j.contains("type"))
    throw ConfigError(key + ": expected object with a type");
  std::string type = j["type"].get<std::string>();
  if (type == "zero") return ControlSignal::none();
  if (type == "constant")
    return ControlSignal::constant(parse_vec(j.at("value"), key + ".value", d));
  if (type == "piecewise") {
    if (!j.contains("times") || !j.contains("values"))
      throw ConfigError(key + ": piecewise needs times and values");
    std::vector<double> times = j["times"].get<std::vector<double>>();
    std::vector<Vec> values;
    for (size_t i = 0; i < j["values"].size(); ++i)
      values.push_back(parse_vec(j["values"][i],
                                 key + ".values[" + std::to_string(i) + "]",
                                 d));
    return ControlSignal::piecewise(std::move(times), std::move(values));
  }
  if (type == "sinusoid")
    return ControlSignal::sinusoid(
        parse_vec(j.at("amplitude"), key + ".amplitude", d),
        j.value("frequency", 1.0), j.value("phase", 0.0));
  throw ConfigError(key + ".type: unknown signal type '" + type + "'");
}

VectorFieldSpec parse_field(const json& cfg, const ModelPtr& m) {
  if (!cfg.contains("field")) throw ConfigError("field: missing");
  const json& f = cfg["field"];
  std::string kind = f.value("kind", "");
  ControlSignal u = f.contains("u") ? parse_signal(f["u"], "field.u", m->d)
                                    : ControlSignal::none();
  if (kind == "left_invariant")
    return VectorFieldSpec::left_invariant(m, std::move(u));
  if (kind == "right_invariant")
    return VectorFieldSpec::right_invariant(m, std::move(u));
  if (kind == "commutator") return VectorFieldSpec::commutator(m, std::move(u));
  if (kind == "zero") return VectorFieldSpec::zero(m);
  throw ConfigError("field.kind: expected left_invariant, right_invariant, "
                    "commutator, or zero");
}

DisturbanceSignal parse_disturbance(const json& cfg, int d) {
  DisturbanceSignal w;
  w.side = DisturbanceSide::right_invariant;
  w.w = ControlSignal::none();
  if (!cfg.contains("disturbance")) return w;
  const json& j = cfg["disturbance"];
  std::string side = j.value("side", "right");
  if (side == "left")
    w.side = DisturbanceSide::left_invariant;
  else if (side != "right")
    throw ConfigError("disturbance.side: expected left or right");
  if (j.contains("w")) w.w = parse_signal(j["w"], "disturbance.w", d);
  return w;
}

NoiseModel parse_noise(const json& cfg, const ModelPtr& m) {
  if (!cfg.contains("noise"))
    return NoiseModel::make(m, NoiseSide::lid, Mat());
  const json& j = cfg["noise"];
  NoiseSide side = NoiseSide::lid;
  std::string s = j.value("side", "lid");
  if (s == "rid")
    side = NoiseSide::rid;
  else if (s != "lid")
    throw ConfigError("noise.side: expected lid or rid");
  if (j.contains("scale"))
    return NoiseModel::isotropic(m, side, j["scale"].get<double>());
  if (j.contains("S")) {
    const json& rows = j["S"];
    Mat S(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) {
      Vec r = parse_vec(rows[i], "noise.S[" + std::to_string(i) + "]",
                        int(S.cols()));
      S.row(i) = r.transpose();
    }
    return NoiseModel::make(m, side, std::move(S));
  }
  throw ConfigError("noise: expected scale or S");
}

ErrorSide parse_error_side(const json& cfg) {
  std::string s = cfg.value("error_side", "lie");
  if (s == "lie") return ErrorSide::lie;
  if (s == "rie") return ErrorSide::rie;
  throw ConfigError("error_side: expected lie or rie");
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void append_g17(std::string& s, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  s += buf;
}

// ---- check ----

int cmd_check(const json& cfg, const Overrides&) {
  ModelPtr m = parse_group(cfg);
  VectorFieldSpec f = parse_field(cfg, m);
  ClassifyReport lin = check_linear(f, 64, 1e-9);
  ClassifyReport aff = check_affine(f, 64, 1e-9);
  double derivation = check_lemma1(m, linearize_at_identity(f, 0.0), 64);
  std::string verdict = lin.holds ? "linear" : aff.holds ? "affine" : "neither";
  std::printf("classification %s\n", verdict.c_str());
  std::printf("linear_residual %.17g\n", lin.max_residual);
  std::printf("affine_residual %.17g\n", aff.max_residual);
  std::printf("derivation_residual %.17g\n", derivation);
  if (!cfg.contains("expected")) return exit_ok;
  std::string expected = cfg["expected"].get<std::string>();
  if (expected != "linear" && expected != "affine" && expected != "neither")
    throw ConfigError("expected: must be linear, affine, or neither");
  if (expected != verdict) {
    std::printf("expectation FAILED: wanted %s\n", expected.c_str());
    return exit_check;
  }
  std::printf("expectation ok\n");
  return exit_ok;
}

// ---- propagate ----

std::string propagate_csv(const VectorFieldSpec& f, ErrorSide side,
                          const DisturbanceSignal& w, const Trajectory& xhat,
                          const Vec& xi0, double dt, bool& singular) {
  const GroupModel& m = *f.model;
  ErrorTrajectory alg = integrate_error_ode_algebra(f, side, w, xhat, xi0, dt);
  ErrorTrajectory grp = integrate_error_ode_group(f, side, w, xhat, xi0, dt);
  std::string csv = "t";
  for (int i = 1; i <= m.d; ++i) csv += ",xi_" + std::to_string(i);
  for (int i = 1; i <= m.d; ++i) csv += ",xi_log_" + std::to_string(i);
  csv += ",discrepancy_norm\n";
  const size_t rows = std::min(alg.xi.size(), grp.xi.size());
  for (size_t k = 0; k < rows; ++k) {
    append_g17(csv, alg.times[k]);
    for (int i = 0; i < m.d; ++i) {
      csv += ',';
      append_g17(csv, alg.xi[k][i]);
    }
    for (int i = 0; i < m.d; ++i) {
      csv += ',';
      append_g17(csv, grp.xi[k][i]);
    }
    csv += ',';
    append_g17(csv, (alg.xi[k] - grp.xi[k]).norm());
    csv += '\n';
  }
  singular = alg.singular_time.has_value() || grp.singular_time.has_value();
  if (singular) {
    // abort marker row: the time of the failure, nan everywhere else
    double ts = alg.singular_time ? *alg.singular_time : *grp.singular_time;
    append_g17(csv, ts);
    for (int i = 0; i < 2 * m.d + 1; ++i) csv += ",nan";
    csv += '\n';
  }
  return csv;
}

int cmd_propagate(const json& cfg, const Overrides& ov) {
  ModelPtr m = parse_group(cfg);
  VectorFieldSpec f = parse_field(cfg, m);
  DisturbanceSignal w = parse_disturbance(cfg, m->d);
  ErrorSide side = parse_error_side(cfg);
  Vec xi0 = cfg.contains("xi0") ? parse_vec(cfg["xi0"], "xi0", m->d)
                                : Vec(Vec::Zero(m->d));
  Vec x0 = cfg.contains("x0") ? parse_vec(cfg["x0"], "x0", m->d)
                              : Vec(Vec::Zero(m->d));
  double t0 = cfg.value("t0", 0.0);
  double T = cfg.value("T", 1.0);
  double dt = ov.dt.value_or(cfg.value("dt", 1e-3));
  Trajectory xhat =
      integrate_group_ode(f, exp_m(*m, x0), t0, T, dt, OdeMethod::rkmk4);
  bool singular = false;
  std::string csv = propagate_csv(f, side, w, xhat, xi0, dt, singular);
  std::filesystem::create_directories(ov.out_dir);
  write_text(std::filesystem::path(ov.out_dir) / "propagate.csv", csv);
  std::printf("wrote %s/propagate.csv\n", ov.out_dir.c_str());
  return singular ? exit_numeric : exit_ok;
}

// ---- sde ----

int cmd_sde(const json& cfg, const Overrides& ov) {
  ModelPtr m = parse_group(cfg);
  VectorFieldSpec f = parse_field(cfg, m);
  NoiseModel noise = parse_noise(cfg, m);
  std::filesystem::create_directories(ov.out_dir);

  if (noise.is_zero()) {
    // no diffusion: the comparison collapses to the deterministic two-route
    DisturbanceSignal w = parse_disturbance(cfg, m->d);
    ErrorSide side = parse_error_side(cfg);
    Vec xi0 = cfg.contains("xi0") ? parse_vec(cfg["xi0"], "xi0", m->d)
                                  : Vec(Vec::Zero(m->d));
    Vec x0 = cfg.contains("x0") ? parse_vec(cfg["x0"], "x0", m->d)
                                : Vec(Vec::Zero(m->d));
    double t0 = cfg.value("t0", 0.0);
    double T = cfg.value("T", 0.5);
    double dt = ov.dt.value_or(cfg.value("dt", 1e-3));
    Trajectory xhat =
        integrate_group_ode(f, exp_m(*m, x0), t0, T, dt, OdeMethod::rkmk4);
    bool singular = false;
    std::string csv = propagate_csv(f, side, w, xhat, xi0, dt, singular);
    write_text(std::filesystem::path(ov.out_dir) / "propagate.csv", csv);
    write_text(std::filesystem::path(ov.out_dir) / "summary.txt",
               "zero noise: deterministic two-route comparison written to "
               "propagate.csv\n");
    std::printf("zero noise, wrote %s/propagate.csv\n", ov.out_dir.c_str());
    return singular ? exit_numeric : exit_ok;
  }

  McConfig mc;
  mc.model = m;
  mc.f = f;
  std::string mode = cfg.value("mode", "state");
  if (mode == "error")
    mc.mode = McMode::error;
  else if (mode != "state")
    throw ConfigError("mode: expected state or error");
  mc.side = parse_error_side(cfg);
  mc.noise = noise;
  mc.x0 = cfg.contains("xi0") ? parse_vec(cfg["xi0"], "xi0", m->d)
          : cfg.contains("x0") ? parse_vec(cfg["x0"], "x0", m->d)
                               : Vec(Vec::Zero(m->d));
  mc.t0 = cfg.value("t0", 0.0);
  mc.T = cfg.value("T", 0.5);
  mc.master_seed = ov.seed.value_or(cfg.value("seed", 0));
  if (cfg.contains("strong_dts"))
    mc.strong_dts = cfg["strong_dts"].get<std::vector<double>>();
  if (ov.dt) mc.strong_dts = {*ov.dt};
  mc.strong_paths = ov.paths.value_or(cfg.value("paths", 64));
  if (cfg.contains("weak")) {
    const json& wj = cfg["weak"];
    mc.run_weak = wj.value("enabled", true);
    mc.weak_dt = ov.dt.value_or(wj.value("dt", 1e-3));
    mc.weak_paths = ov.paths.value_or(wj.value("paths", 10000));
  }

  if (mc.mode == McMode::error) {
    // the error routes need the reference trajectory of the same field
    double ref_dt = cfg.value("dt", 1e-3);
    Vec x0 = cfg.contains("x0") ? parse_vec(cfg["x0"], "x0", m->d)
                                : Vec(Vec::Zero(m->d));
    mc.xhat = integrate_group_ode(f, exp_m(*m, x0), mc.t0, mc.T, ref_dt,
                                  OdeMethod::rkmk4);
    if (cfg.contains("xi0")) mc.x0 = parse_vec(cfg["xi0"], "xi0", m->d);
  }

  // a start on the chart boundary cannot propagate at all; diagnose eagerly
  {
    Mat D = dexp_neg_fast(*m, mc.x0);
    if (D.partialPivLu().rcond() < 1e-12) {
      std::fprintf(stderr,
                   "sde: dexp is singular at the initial state "
                   "(rotation angle at a multiple of 2*pi)\n");
      return exit_numeric;
    }
  }

  McReport rep = monte_carlo_compare(mc);

  std::string strong_csv = "dt,rms_gap,stderr,aborts\n";
  for (const auto& r : rep.strong) {
    append_g17(strong_csv, r.dt);
    strong_csv += ',';
    append_g17(strong_csv, r.rms_gap);
    strong_csv += ',';
    append_g17(strong_csv, r.stderr_gap);
    strong_csv += ',' + std::to_string(r.aborts);
    strong_csv += '\n';
  }
  write_text(std::filesystem::path(ov.out_dir) / "strong.csv", strong_csv);

  if (rep.weak) {
    std::string weak_csv =
        "kind,i,j,group,algebra,se_group,se_algebra\n";
    const McWeakReport& wk = *rep.weak;
    const int d = int(wk.group.mean.size());
    auto row = [&](const char* kind, int i, int j, double a, double b,
                   double sa, double sb) {
      weak_csv += kind;
      weak_csv += ',' + std::to_string(i) + ',' + std::to_string(j) + ',';
      append_g17(weak_csv, a);
      weak_csv += ',';
      append_g17(weak_csv, b);
      weak_csv += ',';
      append_g17(weak_csv, sa);
      weak_csv += ',';
      append_g17(weak_csv, sb);
      weak_csv += '\n';
    };
    for (int i = 0; i < d; ++i)
      row("mean", i + 1, 0, wk.group.mean[i], wk.algebra.mean[i],
          wk.group.stderr_mean[i], wk.algebra.stderr_mean[i]);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j)
        row("cov", i + 1, j + 1, wk.group.cov(i, j), wk.algebra.cov(i, j),
            0.0, 0.0);
    write_text(std::filesystem::path(ov.out_dir) / "weak.csv", weak_csv);
  }

  write_text(std::filesystem::path(ov.out_dir) / "summary.txt", rep.to_text());
  std::printf("%s", rep.to_text().c_str());
  return exit_ok;
}

// ---- oracle ----

int cmd_oracle(const json& cfg, const Overrides& ov) {
  ModelPtr m = parse_group(cfg);
  if (!cfg.contains("oracle")) throw ConfigError("oracle: missing section");
  const json& oj = cfg["oracle"];
  std::string which = oj.value("which", "");
  double tol = oj.value("tolerance", 1e-6);
  OracleReport rep;
  if (which == "c_fd") {
    Vec x = parse_vec(oj.at("x"), "oracle.x", m->d);
    Vec gamma = parse_vec(oj.at("gamma"), "oracle.gamma", m->d);
    NoiseSide side =
        oj.value("side", "lid") == "rid" ? NoiseSide::rid : NoiseSide::lid;
    Vec ref = oracle_c_via_dexp_derivative(*m, x, gamma, side);
    Vec got = c_correction_series(*m, x, gamma, side, 30);
    rep = OracleReport::compare("c_correction vs dexp derivative", ref.norm(),
                                got.norm(), tol);
    rep.abs_error = (ref - got).norm();
    rep.pass = rep.abs_error <= tol;
  } else if (which == "dadmn") {
    Vec x = parse_vec(oj.at("x"), "oracle.x", m->d);
    Vec g = parse_vec(oj.at("g"), "oracle.g", m->d);
    int n = oj.value("n", 2);
    Mat ref = oracle_dadmn_fd(*m, x, g, n);
    Mat got = dadmn(*m, x, g, n);
    rep = OracleReport::compare("dadmn vs finite difference", ref.norm(),
                                got.norm(), tol);
    rep.abs_error = (ref - got).norm();
    rep.pass = rep.abs_error <= tol;
  } else if (which == "short_time_drift") {
    VectorFieldSpec f = parse_field(cfg, m);
    NoiseModel noise = parse_noise(cfg, m);
    Vec x = parse_vec(oj.at("x"), "oracle.x", m->d);
    double dtau = oj.value("dtau", 1e-3);
    int paths = ov.paths.value_or(oj.value("paths", 20000));
    uint64_t seed = ov.seed.value_or(cfg.value("seed", 0));
    DriftEstimate est = oracle_short_time_drift(f, noise, x, dtau, paths, seed);
    SdeCoefficients an = algebra_sde_coefficients(f, noise, x, 0.0);
    // pass iff every component sits within 3 standard errors
    rep.quantity = "short-time drift vs analytic";
    rep.pass = true;
    for (int i = 0; i < m->d; ++i) {
      double dev = std::abs(est.drift[i] - an.drift[i]);
      rep.abs_error = std::max(rep.abs_error, dev);
      if (dev > 3.0 * est.stderr_drift[i]) rep.pass = false;
    }
    rep.reference = est.drift.norm();
    rep.candidate = an.drift.norm();
    rep.tolerance = 0.0;
  } else {
    throw ConfigError("oracle.which: expected c_fd, dadmn, or short_time_drift");
  }
  std::printf("%s: ref %.17g cand %.17g err %.17g -> %s\n",
              rep.quantity.c_str(), rep.reference, rep.candidate,
              rep.abs_error, rep.pass ? "pass" : "FAIL");
  return rep.pass ? exit_ok : exit_check;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"group-system error-dynamics runner"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  uint64_t seed_flag = 0;
  int paths_flag = 0;
  double dt_flag = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario config (JSON)")
        ->required();
    sub->add_option("--seed", seed_flag, "master seed override");
    sub->add_option("--out", ov.out_dir, "output directory");
    sub->add_option("--paths", paths_flag, "path-count override");
    sub->add_option("--dt", dt_flag, "step-size override");
  };
  CLI::App* c_check = app.add_subcommand("check", "classify a field");
  CLI::App* c_prop = app.add_subcommand("propagate", "two-route error ODE");
  CLI::App* c_sde = app.add_subcommand("sde", "two-route SDE ensembles");
  CLI::App* c_orc = app.add_subcommand("oracle", "brute-force comparisons");
  for (CLI::App* sub : {c_check, c_prop, c_sde, c_orc}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    json cfg = load_config(config_path);
    for (CLI::App* sub : {c_check, c_prop, c_sde, c_orc}) {
      if (!sub->parsed()) continue;
      if (sub->count("--seed")) ov.seed = seed_flag;
      if (sub->count("--paths")) ov.paths = paths_flag;
      if (sub->count("--dt")) ov.dt = dt_flag;
    }
    if (c_check->parsed()) return cmd_check(cfg, ov);
    if (c_prop->parsed()) return cmd_propagate(cfg, ov);
    if (c_sde->parsed()) return cmd_sde(cfg, ov);
    return cmd_oracle(cfg, ov);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  } catch (const SingularityError& e) {
    std::fprintf(stderr, "numerical abort: %s (t=%.6g)\n", e.what(), e.time);
    return exit_numeric;
  } catch (const BranchError& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return exit_numeric;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return exit_numeric;
  }
}
