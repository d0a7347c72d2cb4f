#include "fhnvs_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>

#include "fhnvs/error.hpp"
#include "fhnvs/field_io.hpp"
#include "fhnvs/random.hpp"
#include "fhnvs/solvers.hpp"
#include "fhnvs/spectral.hpp"

namespace fhnvs::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Context {
  RunConfig cfg;
  Grid grid;
  fs::path out;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

void write_field(const Context& ctx, const Field& f, const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  for (const std::string& fmt : ctx.cfg.outputs.formats) {
    if (fmt == "csv") save_csv(f, dir / (name + ".csv"));
    if (fmt == "vtk") save_vtk(f, dir / (name + ".vtk"), name);
  }
}

/// JSON numbers cannot hold inf/nan; encode them as strings.
json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Field spectral_target(const Context& ctx) {
  const CoefficientSet cs = make_coefficients(ctx.cfg, ctx.grid);
  const std::string& t = ctx.cfg.spectral.target;
  if (t == "a") return cs.a();
  if (t == "d") return cs.d();
  if (t == "e") return cs.e();
  return cs.b();
}

ReducedOperator make_operator(const Context& ctx) {
  ReducedOptions ro;
  ro.inner_tol = ctx.cfg.solver.inner_tol;
  return ReducedOperator(make_coefficients(ctx.cfg, ctx.grid), ro);
}

EnergyProblem make_problem(const Context& ctx) {
  EnergyOptions eo;
  eo.outer_tol = ctx.cfg.solver.outer_tol;
  return EnergyProblem(make_operator(ctx), make_nonlinearity(ctx.cfg, ctx.grid), ctx.cfg.solver.metric, eo);
}

bool passes(const SolutionReport& r) {
  return r.residual_1 <= kVerifyResidualTol && r.residual_2 <= kVerifyResidualTol;
}

int cmd_check_coeffs(const Context& ctx, json& rep) {
  const CoefficientSet cs = make_coefficients(ctx.cfg, ctx.grid);
  const double l1b = lambda1(cs.b());
  rep["lambda1_b"] = l1b;
  rep["b_certified"] = l1b > kCertificationTol;
  rep["a_positive"] = cs.a_positive();
  rep["e_min"] = cs.e().min();
  rep["d_min"] = cs.d().min();
  rep["negative_nodes_a"] = negative_nodes(cs.a()).size();
  rep["negative_nodes_b"] = negative_nodes(cs.b()).size();
  const RatioEnvelope env = norm_equivalence_diagnostic(cs.phi(), cs.b(), 20, ctx.cfg.spectral.seed);
  rep["phi_b_norm_ratio"] = {{"min", num(env.min_ratio)}, {"max", num(env.max_ratio)}, {"trials", env.trials}};
  ReducedOptions ro;
  ro.inner_tol = ctx.cfg.solver.inner_tol;
  const ReducedOperator op(cs, ro);
  rep["star_available"] = op.star_available();
  rep["factorization_available"] = op.factorization_available();
  rep["lambda1_d"] = num(op.lambda1_d());
  Rng rng(ctx.cfg.spectral.seed);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    worst = std::max(worst, norm_ab_identity_check(op, random_smooth_field(ctx.grid, rng)).rel_err);
  }
  rep["norm_identity_max_rel_err"] = worst;
  const MaxPrincipleReport mp = maxprinciple_check(op, 10, ctx.cfg.spectral.seed);
  rep["max_principle"] = {{"trials", mp.trials},
                          {"violations_b", mp.violations_b},
                          {"violations_factorized", mp.violations_factorized},
                          {"not_strict_b", mp.not_strict_b},
                          {"not_strict_factorized", mp.not_strict_factorized},
                          {"worst_min_b", num(mp.worst_min_b)},
                          {"worst_min_factorized", num(mp.worst_min_factorized)}};
  return kExitOk;
}

int cmd_lambda1(const Context& ctx, json& rep) {
  const Field sigma = spectral_target(ctx);
  const EigenPair ep = lowest_eigenpair(sigma, DomainMask::full(ctx.grid));
  rep["target"] = ctx.cfg.spectral.target;
  rep["lambda1"] = ep.value;
  rep["positive"] = ep.value > kCertificationTol;
  rep["iterations"] = ep.iterations;
  rep["residual"] = ep.residual;
  write_field(ctx, ep.vector, ctx.out, "eigenvector");
  return kExitOk;
}

int cmd_nu_s(const Context& ctx, json& rep) {
  const SpectralConfig& sp = ctx.cfg.spectral;
  const Field sigma = spectral_target(ctx);
  NuOptions no;
  no.restarts = sp.restarts;
  no.seed = sp.seed;
  const NuResult full = nu_s(sigma, DomainMask::full(ctx.grid), sp.s, no);
  rep["target"] = sp.target;
  rep["s"] = sp.s;
  rep["nu_s"] = num(full.value);
  rep["formal"] = full.formal;
  rep["stagnated"] = full.stagnated;
  rep["restart_values"] = full.restart_values;
  write_field(ctx, full.minimizer, ctx.out, "minimizer");
  if (!sp.centers.empty() || !sp.ladder.empty()) {
    const ClassReport cr = shifted_ball_diagnostic(sigma, sp.ball_radius, sp.centers, sp.ladder, sp.s, no);
    json balls = json::array();
    for (const NuSample& v : cr.nu_values) {
      balls.push_back({{"center", {v.center[0], v.center[1], v.center[2]}}, {"radius", v.radius}, {"nu_s", num(v.value)}});
    }
    json ext = json::array();
    for (const NuSample& v : cr.exterior_values) ext.push_back({{"rho", v.radius}, {"nu_s", num(v.value)}});
    rep["lambda1"] = cr.lambda1;
    rep["lambda1_positive"] = cr.lambda1_positive;
    rep["shifted_balls"] = balls;
    rep["shifted_ball_trend_increasing"] = cr.nu_trend_increasing;
    rep["exterior"] = ext;
    rep["exterior_trend_increasing"] = cr.exterior_trend_increasing;
  }
  return kExitOk;
}

void save_solution(const Context& ctx, const SolutionReport& r, const fs::path& dir) {
  write_field(ctx, r.u, dir, "u");
  write_field(ctx, r.v, dir, "v");
}

int cmd_solve_mp(const Context& ctx, json& rep) {
  const EnergyProblem prob = make_problem(ctx);
  const SolutionReport r = mountain_pass(prob, ctx.cfg.solver.cfg);
  save_solution(ctx, r, ctx.out);
  rep["metric"] = to_string(prob.metric());
  rep["solution"] = solution_json(r, true);
  return r.converged ? kExitOk : kExitFailure;
}

int cmd_solve_three(const Context& ctx, json& rep) {
  const EnergyProblem prob = make_problem(ctx);
  const ThreeSolutionResult t = three_solutions(prob, ctx.cfg.solver.cfg);
  save_solution(ctx, t.u1, ctx.out / "u1");
  save_solution(ctx, t.u2, ctx.out / "u2");
  save_solution(ctx, t.u3, ctx.out / "u3");
  rep["u1"] = solution_json(t.u1, true);
  rep["u2"] = solution_json(t.u2, true);
  rep["u3"] = solution_json(t.u3, true);
  rep["sign_changing_found"] = t.sign_changing_found;
  rep["u3_attempts"] = t.u3_attempts;
  rep["path_lambda0"] = t.path_lambda0;
  rep["path_max_energy"] = t.path_max_energy;
  rep["log"] = t.log;
  const bool ok = t.u1.converged && t.u2.converged && t.u3.converged && t.sign_changing_found;
  return ok ? kExitOk : kExitFailure;
}

int cmd_verify(const Context& ctx, const fs::path& solution, json& rep) {
  const EnergyProblem prob = make_problem(ctx);
  std::vector<std::pair<std::string, fs::path>> dirs;
  if (fs::exists(solution / "u.csv")) {
    dirs.emplace_back("solution", solution);
  } else {
    for (const char* name : {"u1", "u2", "u3"}) {
      if (fs::exists(solution / name / "u.csv")) dirs.emplace_back(name, solution / name);
    }
  }
  if (dirs.empty()) throw FormatError(solution.string() + ": no u.csv found");
  bool ok = true;
  json sols = json::object();
  for (const auto& [name, dir] : dirs) {
    const Field u = load_csv(ctx.grid, dir / "u.csv");
    const Field v = fs::exists(dir / "v.csv") ? load_csv(ctx.grid, dir / "v.csv") : prob.op().apply_Sb(u);
    const SolutionReport r = certify_pair(prob, u, v);
    json j = solution_json(r, false);
    for (const char* key : {"label", "status", "converged", "iterations", "newton_iterations", "newton_residual",
                            "newton_fallback", "initial_path_max", "ps_proxy"}) {
      j.erase(key);
    }
    j["passed"] = passes(r);
    ok = ok && passes(r);
    sols[name] = j;
  }
  const HypothesisReport hr = validate_hypotheses(prob.spec(), ctx.grid, 20, ctx.cfg.solver.cfg.seed);
  rep["solutions"] = sols;
  rep["residual_tol"] = kVerifyResidualTol;
  rep["hypotheses_passed"] = hr.all_passed();
  rep["passed"] = ok;
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"check-coeffs", "lambda1", "nu-s", "solve-mp", "solve-three", "verify"};
  return names;
}

json solution_json(const SolutionReport& r, bool include_trace) {
  json j = {{"label", r.label},
            {"status", r.status},
            {"converged", r.converged},
            {"energy", r.energy},
            {"grad_norm", r.grad_norm},
            {"norm", r.norm},
            {"residual_1", r.residual_1},
            {"residual_2", r.residual_2},
            {"sign_class", to_string(r.sign_class)},
            {"u_min", r.min_value},
            {"u_max", r.max_value},
            {"v_min", r.v_min},
            {"v_max", r.v_max},
            {"iterations", r.iterations},
            {"newton_iterations", r.newton_iterations},
            {"newton_residual", r.newton_residual},
            {"newton_fallback", r.newton_fallback},
            {"initial_path_max", r.initial_path_max},
            {"ps_proxy", {{"entries", r.ps.entries}, {"excursions", r.ps.excursions}, {"bounded", r.ps.bounded}}}};
  if (include_trace) {
    json tr = json::array();
    for (const TraceEntry& t : r.trace) {
      tr.push_back({{"iter", t.iter},
                    {"level", t.level},
                    {"grad_norm", t.grad_norm},
                    {"norm", t.norm},
                    {"norm_ab", t.norm_ab},
                    {"step", t.step}});
    }
    j["trace"] = tr;
  }
  return j;
}

int dispatch(const CommandOptions& options, std::ostream& log) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), options.command) == names.end()) {
    log << "error: unknown command '" << options.command << "'\n";
    return kExitConfig;
  }
  RunConfig cfg;
  std::optional<Context> ctx;
  try {
    cfg = parse_config(options.config);
    if (options.out) cfg.outputs.dir = *options.out;
    if (options.s) {
      if (!(*options.s >= 2.0)) throw ConfigError("--s: must be >= 2");
      cfg.spectral.s = *options.s;
    }
    if (options.ladder) cfg.spectral.ladder = *options.ladder;
    if (options.command == "verify" && !options.solution) throw ConfigError("--solution: required for verify");
    ctx.emplace(Context{cfg, make_grid(cfg), fs::path(cfg.outputs.dir)});
    fs::create_directories(ctx->out);
    write_json(ctx->out / "config.effective.json", cfg.to_json());
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  json rep = {{"command", options.command}};
  const fs::path report_path = ctx->out / (options.command == "verify" ? "verify.json" : "report.json");
  int status = kExitFailure;
  try {
    if (options.command == "check-coeffs") status = cmd_check_coeffs(*ctx, rep);
    if (options.command == "lambda1") status = cmd_lambda1(*ctx, rep);
    if (options.command == "nu-s") status = cmd_nu_s(*ctx, rep);
    if (options.command == "solve-mp") status = cmd_solve_mp(*ctx, rep);
    if (options.command == "solve-three") status = cmd_solve_three(*ctx, rep);
    if (options.command == "verify") status = cmd_verify(*ctx, *options.solution, rep);
    rep["status"] = status == kExitOk ? "ok" : "failed";
  } catch (const InvalidArgument& e) {
    log << "config error: " << e.what() << '\n';
    rep["status"] = "config_error";
    rep["error"] = e.what();
    status = kExitConfig;
  } catch (const FormatError& e) {
    log << "input error: " << e.what() << '\n';
    rep["status"] = "config_error";
    rep["error"] = e.what();
    status = kExitConfig;
  } catch (const CertificationError& e) {
    log << "certification error: " << e.what() << '\n';
    rep["status"] = "certification_error";
    rep["error"] = e.what();
    status = kExitFailure;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    rep["status"] = "error";
    rep["error"] = e.what();
    status = kExitFailure;
  }
  write_json(report_path, rep);
  return status;
}

}  // namespace fhnvs::cli
