#include "fhnvs/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "fhnvs/error.hpp"
#include "fhnvs/parallel.hpp"
#include "fhnvs/random.hpp"

namespace fhnvs {

void SolverConfig::validate() const {
  if (path_points < 3) throw InvalidArgument("solver.path_points must be >= 3");
  if (!(descent_step > 0.0)) throw InvalidArgument("solver.descent_step must be positive");
  if (max_outer_iters < 1) throw InvalidArgument("solver.max_outer_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw InvalidArgument("solver.grad_tol must be positive");
  if (!(newton_tol > 0.0)) throw InvalidArgument("solver.newton_tol must be positive");
  if (newton_max_iters < 0) throw InvalidArgument("solver.newton_max_iters must be >= 0");
  if (!(newton_inner_tol > 0.0)) throw InvalidArgument("solver.newton_inner_tol must be positive");
  if (!(rho_fraction > 0.0 && rho_fraction < 1.0)) throw InvalidArgument("solver.rho_fraction must be in (0, 1)");
  if (u3_restarts < 1) throw InvalidArgument("solver.u3_restarts must be >= 1");
  if (stagnation_sweeps < 1) throw InvalidArgument("solver.stagnation_sweeps must be >= 1");
}

namespace {

using Scalar = std::function<double(double)>;

struct Peak1d {
  double t = 0.0;
  double value = 0.0;
  bool interior = false;
};

/// Maximizes φ on [0, ∞) given φ' and φ''. The maximum is bracketed by
/// sampling `points` values on [0, T] (T doubled until φ'(T) < 0) and then
/// polished by safeguarded Newton on φ'.
Peak1d maximize_1d(const Scalar& phi, const Scalar& dphi, const Scalar& d2phi, double T, int points) {
  int doublings = 0;
  while (!(dphi(T) < 0.0)) {
    if (++doublings > 60) throw SolveError("path maximum", "no maximum found along the path", dphi(T), doublings);
    T *= 2.0;
  }
  std::size_t best = 0;
  double best_val = phi(0.0);
  for (int j = 1; j < points; ++j) {
    const double v = phi(T * j / (points - 1));
    if (v > best_val) {
      best_val = v;
      best = static_cast<std::size_t>(j);
    }
  }
  if (best == 0) return {0.0, best_val, false};
  const auto node = [&](std::size_t j) { return T * static_cast<double>(j) / (points - 1); };
  const double tk = node(best);
  double lo;
  double hi;
  if (dphi(tk) > 0.0) {
    lo = tk;
    hi = node(std::min<std::size_t>(best + 1, static_cast<std::size_t>(points - 1)));
    if (hi == tk) return {tk, best_val, true};
  } else {
    lo = node(best - 1);
    hi = tk;
    if (!(dphi(lo) > 0.0)) return {tk, best_val, true};
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double d = dphi(t);
    if (d == 0.0) break;
    if (d > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    const double dd = d2phi(t);
    double next = dd < 0.0 ? t - d / dd : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const bool done = std::abs(next - t) <= 4e-16 * std::abs(t) || hi - lo <= 4e-16 * hi;
    t = next;
    if (done) break;
  }
  const double value = phi(t);
  if (value < best_val) return {tk, best_val, true};
  return {t, value, true};
}

double psi_scaled(const NonlinearitySpec& spec, const Field& w, double t) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += spec.F(i, t * w[i]);
  return s * w.grid().quad_weight();
}

double dpsi_scaled(const NonlinearitySpec& spec, const Field& w, double t) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += spec.f(i, t * w[i]) * w[i];
  return s * w.grid().quad_weight();
}

double d2psi_scaled(const NonlinearitySpec& spec, const Field& w, double t) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += spec.fu(i, t * w[i]) * w[i] * w[i];
  return s * w.grid().quad_weight();
}

/// Maximum of t ↦ J(t w) = ½t²‖w‖²_ab − Ψ(t w).
Peak1d peak_on_ray(const EnergyProblem& prob, const Field& w, double T, int points) {
  const double q = prob.op().inner_ab(w, w);
  const NonlinearitySpec& spec = prob.spec();
  return maximize_1d([&](double t) { return 0.5 * t * t * q - psi_scaled(spec, w, t); },
                     [&](double t) { return t * q - dpsi_scaled(spec, w, t); },
                     [&](double t) { return q - d2psi_scaled(spec, w, t); }, T, points);
}

struct Peak2d {
  double alpha = 0.0;
  double beta = 0.0;
  double level = 0.0;
  bool interior = false;
};

/// Gram entries ⟨·,·⟩_ab of the signed parts.
struct Gram {
  double g11 = 0.0;
  double g12 = 0.0;
  double g22 = 0.0;
};

Gram signed_gram(const ReducedOperator& op, const Field& up, const Field& um) {
  const Field sp = op.apply_Sb(up);
  const Field sm = op.apply_Sb(um);
  const Field lp = laplacian_apply(up);
  const Field& a = op.coeffs().a();
  Gram g;
  g.g11 = inner_l2(lp, up) + inner_l2(hadamard(a, up), sp);
  g.g22 = inner_l2(laplacian_apply(um), um) + inner_l2(hadamard(a, um), sm);
  g.g12 = inner_l2(lp, um) + 0.5 * (inner_l2(hadamard(a, up), sm) + inner_l2(hadamard(a, um), sp));
  return g;
}

double two_level(const NonlinearitySpec& spec, const Gram& g, const Field& up, const Field& um, double al,
                 double be) {
  return 0.5 * (al * al * g.g11 + 2.0 * al * be * g.g12 + be * be * g.g22) - psi_scaled(spec, up, al) -
         psi_scaled(spec, um, be);
}

/// Maximum of (α, β) ↦ J(α u⁺ + β u⁻) over α, β > 0 by alternating 1D
/// maximization followed by a 2D Newton polish.
Peak2d peak_two(const EnergyProblem& prob, const Field& up, const Field& um, int points) {
  const NonlinearitySpec& spec = prob.spec();
  const Gram g = signed_gram(prob.op(), up, um);
  double al = 1.0;
  double be = 1.0;
  for (int sweep = 0; sweep < 500; ++sweep) {
    const Peak1d pa = maximize_1d(
        [&](double t) { return 0.5 * (t * t * g.g11 + 2.0 * t * be * g.g12) - psi_scaled(spec, up, t); },
        [&](double t) { return t * g.g11 + be * g.g12 - dpsi_scaled(spec, up, t); },
        [&](double t) { return g.g11 - d2psi_scaled(spec, up, t); }, 2.0 * al, points);
    if (!pa.interior) return {};
    const Peak1d pb = maximize_1d(
        [&](double t) { return 0.5 * (t * t * g.g22 + 2.0 * t * pa.t * g.g12) - psi_scaled(spec, um, t); },
        [&](double t) { return t * g.g22 + pa.t * g.g12 - dpsi_scaled(spec, um, t); },
        [&](double t) { return g.g22 - d2psi_scaled(spec, um, t); }, 2.0 * be, points);
    if (!pb.interior) return {};
    const double change = std::abs(pa.t - al) / pa.t + std::abs(pb.t - be) / pb.t;
    al = pa.t;
    be = pb.t;
    if (change <= 1e-9) break;
  }
  for (int it = 0; it < 10; ++it) {
    const double ga = al * g.g11 + be * g.g12 - dpsi_scaled(spec, up, al);
    const double gb = be * g.g22 + al * g.g12 - dpsi_scaled(spec, um, be);
    const double haa = g.g11 - d2psi_scaled(spec, up, al);
    const double hbb = g.g22 - d2psi_scaled(spec, um, be);
    const double hab = g.g12;
    const double det = haa * hbb - hab * hab;
    if (!(haa < 0.0 && det > 0.0)) break;
    const double da = -(hbb * ga - hab * gb) / det;
    const double db = -(haa * gb - hab * ga) / det;
    if (!(al + da > 0.0 && be + db > 0.0)) break;
    const double before = two_level(spec, g, up, um, al, be);
    if (two_level(spec, g, up, um, al + da, be + db) < before) break;
    al += da;
    be += db;
    if (std::abs(da) <= 1e-15 * al && std::abs(db) <= 1e-15 * be) break;
  }
  return {al, be, two_level(spec, g, up, um, al, be), true};
}

Field default_bump(const Grid& grid) {
  return gaussian_bump(grid, Point{0.0, 0.0, 0.0}, 0.25 * grid.half_width());
}

TraceEntry trace_entry(const EnergyProblem& prob, int iter, double level, double grad_norm, const Field& u,
                       double step) {
  TraceEntry t;
  t.iter = iter;
  t.level = level;
  t.grad_norm = grad_norm;
  t.norm = prob.norm(u);
  t.norm_ab = prob.metric() == Metric::ab ? t.norm : std::sqrt(std::max(0.0, prob.op().inner_ab(u, u)));
  t.step = step;
  return t;
}

/// Newton, collapse check and certification shared by every minimax driver.
SolutionReport finish(const EnergyProblem& prob, const SolverConfig& cfg, const Field& u, bool descent_converged,
                      std::string status, int iterations, std::vector<TraceEntry> trace, bool newton, double rho,
                      double initial_path_max, const std::string& label) {
  Field refined = u;
  NewtonResult nr(u.grid());
  if (newton) {
    nr = newton_refine(prob, u, cfg);
    refined = nr.u;
  }
  SolutionReport rep = certify(prob, refined, std::move(trace));
  rep.label = label;
  rep.iterations = iterations;
  rep.initial_path_max = initial_path_max;
  rep.newton_iterations = nr.iterations;
  rep.newton_residual = newton ? nr.residual : 0.0;
  rep.newton_fallback = nr.fallback_used;
  const double norm_ab = std::sqrt(std::max(0.0, prob.op().inner_ab(refined, refined)));
  const bool collapsed = rho > 0.0 && norm_ab < cfg.rho_fraction * rho;
  if (collapsed) {
    status = "collapsed: iterate fell below rho_fraction * rho (failed geometry)";
  } else if (!(rep.energy > 0.0)) {
    status = "non-positive level";
  } else if (rep.grad_norm > cfg.grad_tol) {
    if (status == "converged") status = "gradient certificate failed after refinement";
  } else if (newton && !nr.converged && status == "converged") {
    status = "converged (newton did not reach newton_tol: " + nr.message + ")";
  }
  rep.status = status;
  rep.converged = descent_converged && !collapsed && rep.energy > 0.0 && rep.grad_norm <= cfg.grad_tol;
  return rep;
}

}  // namespace

EndpointResult find_endpoint_g(const EnergyProblem& prob, const Field& u0, const SolverConfig& cfg) {
  cfg.validate();
  if (u0.max_abs() == 0.0) throw InvalidArgument("find_endpoint_g requires a nonzero profile");
  const double q = prob.op().inner_ab(u0, u0);
  const auto level = [&](double lam) { return 0.5 * lam * lam * q - psi_scaled(prob.spec(), u0, lam); };
  EndpointResult out(u0.grid());
  double lam = 1.0;
  double j = level(lam);
  out.ladder.emplace_back(lam, j);
  while (!(j < 0.0)) {
    if (out.doublings == 60) {
      throw SolveError("endpoint search",
                       "J(lambda u0) stayed nonnegative after 60 doublings; the nonlinearity may violate the "
                       "Ambrosetti-Rabinowitz condition",
                       j, out.doublings);
    }
    ++out.doublings;
    lam *= 2.0;
    j = level(lam);
    out.ladder.emplace_back(lam, j);
  }
  out.lambda0 = lam;
  out.energy = j;
  out.half_energy = level(0.5 * lam);
  out.g = lam * u0;
  return out;
}

double sampled_rho(const EnergyProblem& prob, std::uint64_t seed, int samples) {
  Rng rng(seed);
  double c = 0.0;
  for (int s = 0; s <= samples; ++s) {
    Field u = s == 0 ? default_bump(prob.grid()) : random_smooth_field(prob.grid(), rng, 6, false);
    const double n2 = prob.op().inner_ab(u, u);
    if (!(n2 > 0.0)) continue;
    u *= 1.0 / std::sqrt(n2);
    c = std::max(c, prob.spec().mu0 * prob.psi(u));
  }
  if (!(c > 0.0) || !(prob.spec().p > 1.0)) return 0.0;
  return 0.5 * std::pow(prob.spec().mu0 / (2.0 * c), 1.0 / (prob.spec().p - 1.0));
}

Field newton_residual(const ReducedOperator& op, const NonlinearitySpec& spec, const Field& u) {
  Field r = op.apply_forward(u);
  r -= apply_f(spec, u);
  return r;
}

NewtonResult newton_refine(const EnergyProblem& prob, const Field& u0, const SolverConfig& cfg) {
  const ReducedOperator op = prob.op().with_inner_tol(cfg.newton_inner_tol);
  const NonlinearitySpec& spec = prob.spec();
  NewtonResult res(u0.grid());
  res.u = u0;
  Field r = newton_residual(op, spec, res.u);
  double rn = dual_norm(r);
  res.initial_residual = rn;
  res.history.push_back(rn);
  if (u0.max_abs() == 0.0) {
    res.degenerate = true;
    res.residual = rn;
    res.converged = rn <= cfg.newton_tol;
    res.message = "degenerate solution: u = 0 is a trivial critical point";
    return res;
  }
  while (rn > cfg.newton_tol && res.iterations < cfg.newton_max_iters) {
    ++res.iterations;
    const Field fu = apply_fu(spec, res.u);
    const LinearOperator jac = [&op, &fu](const Field& x, Field& y) {
      y = op.apply_forward(x);
      y -= hadamard(fu, x);
    };
    const double eta = std::clamp(rn, 1e-12, 1e-2);
    const MinresResult mr = minres_solve(jac, -r, eta, 4000);
    bool accepted = false;
    if (mr.converged || mr.relative_residual < 0.5) {
      double s = 1.0;
      for (int k = 0; k < 12; ++k) {
        Field trial = res.u;
        trial.axpy(s, mr.x);
        Field rt = newton_residual(op, spec, trial);
        const double tn = dual_norm(rt);
        if (tn < (1.0 - 1e-4 * s) * rn) {
          res.u = std::move(trial);
          r = std::move(rt);
          rn = tn;
          accepted = true;
          break;
        }
        s *= 0.5;
      }
    }
    if (!accepted) {
      res.fallback_used = true;
      Field trial = res.u - 0.5 * prob.gradient(res.u);
      Field rt = newton_residual(op, spec, trial);
      const double tn = dual_norm(rt);
      if (!(tn < rn)) {
        res.message = "linearization solve failed and the gradient fallback did not reduce the residual";
        res.history.push_back(rn);
        break;
      }
      res.u = std::move(trial);
      r = std::move(rt);
      rn = tn;
    }
    res.history.push_back(rn);
  }
  res.residual = rn;
  res.converged = rn <= cfg.newton_tol;
  if (!res.converged && res.message.empty()) res.message = "iteration limit reached";
  return res;
}

SolutionReport mountain_pass(const EnergyProblem& prob, const SolverConfig& cfg, const MountainPassOptions& options) {
  cfg.validate();
  std::optional<ConeProjection> cone;
  if (options.constraint != ConeConstraint::none) cone.emplace(prob.op());
  Field w = options.start ? *options.start : default_bump(prob.grid());
  if (!options.start && options.constraint == ConeConstraint::negative) w *= -1.0;
  require_same_grid(prob.grid(), w.grid(), "mountain_pass start");

  const EndpointResult ep = find_endpoint_g(prob, w, cfg);
  Peak1d pk = peak_on_ray(prob, w, ep.lambda0, cfg.path_points);
  if (!pk.interior) throw SolveError("mountain pass", "initial path has no interior maximum", 0.0, 0);
  const double initial_path_max = pk.value;
  const double rho = sampled_rho(prob, cfg.seed);

  const auto constrain = [&](Field f) {
    if (options.constraint == ConeConstraint::positive && f.min() < 0.0) return cone->project(f, false).pk;
    if (options.constraint == ConeConstraint::negative && f.max() > 0.0) return cone->project_negative(f, false).pk;
    return f;
  };

  Field u = pk.t * w;
  double level = pk.value;
  double best = level;
  int since_improvement = 0;
  double tau = cfg.descent_step;
  const double max_step = std::max(cfg.descent_step, 1.0);
  std::vector<TraceEntry> trace;
  std::string status = "iteration limit reached";
  bool converged = false;
  int iter = 0;
  for (iter = 1; iter <= cfg.max_outer_iters; ++iter) {
    const Field g = prob.gradient(u);
    const double gn = prob.norm(g);
    trace.push_back(trace_entry(prob, iter, level, gn, u, tau));
    if (gn <= cfg.grad_tol) {
      converged = true;
      status = "converged";
      break;
    }
    bool accepted = false;
    while (tau >= 1e-12) {
      Field trial = constrain(u - tau * g);
      if (trial.max_abs() > 0.0) {
        const Peak1d tp = peak_on_ray(prob, trial, 2.0, cfg.path_points);
        if (tp.interior && tp.value <= level - 1e-4 * tau * gn * gn) {
          u = tp.t * trial;
          level = tp.value;
          accepted = true;
          break;
        }
      }
      tau *= 0.5;
    }
    if (!accepted) {
      status = "stagnated: no descent step accepted";
      converged = gn <= 10.0 * cfg.grad_tol;
      break;
    }
    if (level < best - 1e-13 * std::abs(best)) {
      best = level;
      since_improvement = 0;
    } else if (++since_improvement >= cfg.stagnation_sweeps) {
      status = "stagnated: level not decreasing";
      break;
    }
    tau = std::min(2.0 * tau, max_step);
  }
  iter = std::min(iter, cfg.max_outer_iters);
  return finish(prob, cfg, u, converged, status, iter, std::move(trace), options.newton, rho, initial_path_max,
                options.label);
}

namespace {

constexpr double kBumpClip = 1e-12;

struct BumpPair {
  Field w1;
  Field w2;
};

/// Gaussian bumps at ±c with supports (after clipping) at least 4h apart.
BumpPair disjoint_bumps(const Grid& grid, const Point& c) {
  const double dist = 2.0 * std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  const double reach = std::sqrt(2.0 * std::log(1.0 / kBumpClip));
  const double width = std::min(0.125 * grid.half_width(), (dist - 4.0 * grid.spacing()) / (2.0 * reach));
  if (!(width > 0.0)) throw InvalidArgument("box too small for disjoint bumps");
  const Point m{-c[0], -c[1], -c[2]};
  return {gaussian_bump(grid, c, width, kBumpClip), -gaussian_bump(grid, m, width, kBumpClip)};
}

Point placement(const Grid& grid, int restart, int restarts) {
  const double r = 0.5 * grid.half_width();
  if (grid.dim() == 1) return {r * (1.0 - 0.1 * restart), 0.0, 0.0};
  const double theta = restart * std::acos(-1.0) / (2.0 * restarts);
  return {r * std::cos(theta), r * std::sin(theta), 0.0};
}

struct U3Attempt {
  std::optional<SolutionReport> report;
  double lambda0 = 0.0;
  double path_max = 0.0;
  std::string note;
};

U3Attempt sign_changing_attempt(const EnergyProblem& prob, const SolverConfig& cfg, int restart, double rho) {
  U3Attempt out;
  const BumpPair bp = disjoint_bumps(prob.grid(), placement(prob.grid(), restart, cfg.u3_restarts));
  const NonlinearitySpec& spec = prob.spec();
  const Gram g0 = signed_gram(prob.op(), bp.w1, bp.w2);

  // h(t) = λ₀(t w₁ + (1−t) w₂) with J < 0 along the whole path.
  double lam = 1.0;
  double path_max = 0.0;
  for (int k = 0; k <= 60; ++k) {
    path_max = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < cfg.path_points; ++j) {
      const double t = static_cast<double>(j) / (cfg.path_points - 1);
      path_max = std::max(path_max, two_level(spec, g0, bp.w1, bp.w2, lam * t, lam * (1.0 - t)));
    }
    if (path_max < 0.0) break;
    lam *= 2.0;
  }
  out.lambda0 = lam;
  out.path_max = path_max;
  if (!(path_max < 0.0)) {
    out.note = "restart " + std::to_string(restart) + ": no negative two-bump path";
    return out;
  }

  Peak2d pk = peak_two(prob, bp.w1, bp.w2, cfg.path_points);
  if (!pk.interior) {
    out.note = "restart " + std::to_string(restart) + ": initial two-parameter peak degenerate";
    return out;
  }
  Field u = pk.alpha * bp.w1 + pk.beta * bp.w2;
  double level = pk.level;
  const double initial_max = level;
  double best = level;
  int since_improvement = 0;
  double tau = cfg.descent_step;
  const double max_step = std::max(cfg.descent_step, 1.0);
  std::vector<TraceEntry> trace;
  std::string status = "iteration limit reached";
  bool converged = false;
  int iter = 0;
  for (iter = 1; iter <= cfg.max_outer_iters; ++iter) {
    const Field g = prob.gradient(u);
    const double gn = prob.norm(g);
    trace.push_back(trace_entry(prob, iter, level, gn, u, tau));
    if (gn <= cfg.grad_tol) {
      converged = true;
      status = "converged";
      break;
    }
    bool accepted = false;
    while (tau >= 1e-12) {
      const Field trial = u - tau * g;
      const Field up = positive_part(trial);
      const Field um = negative_part(trial);
      if (up.max_abs() > 0.0 && um.max_abs() > 0.0) {
        const Peak2d tp = peak_two(prob, up, um, cfg.path_points);
        if (tp.interior && tp.level <= level - 1e-4 * tau * gn * gn) {
          u = tp.alpha * up + tp.beta * um;
          level = tp.level;
          accepted = true;
          break;
        }
      }
      tau *= 0.5;
    }
    if (!accepted) {
      status = "stagnated: no sign-preserving descent step accepted";
      converged = gn <= 10.0 * cfg.grad_tol;
      break;
    }
    if (level < best - 1e-13 * std::abs(best)) {
      best = level;
      since_improvement = 0;
    } else if (++since_improvement >= cfg.stagnation_sweeps) {
      status = "stagnated: level not decreasing";
      break;
    }
    tau = std::min(2.0 * tau, max_step);
  }
  iter = std::min(iter, cfg.max_outer_iters);
  SolutionReport rep =
      finish(prob, cfg, u, converged, status, iter, std::move(trace), true, rho, initial_max, "u3");
  if (rep.sign_class != SignClass::sign_changing) {
    out.note = "restart " + std::to_string(restart) + ": refined iterate is " + to_string(rep.sign_class);
    rep.converged = false;
  } else {
    out.note = "restart " + std::to_string(restart) + ": " + rep.status;
  }
  out.report = std::move(rep);
  return out;
}

}  // namespace

ThreeSolutionResult three_solutions(const EnergyProblem& prob, const SolverConfig& cfg) {
  cfg.validate();
  const ReducedOperator& op = prob.op();
  if (!op.coeffs().a_positive()) throw CertificationError("three_solutions requires a > 0");
  if (!op.star_available()) throw CertificationError("three_solutions requires e = b - 2 sqrt(beta) a >= 0");
  if (!op.factorization_available()) throw CertificationError("three_solutions requires lambda1(d) > 0");
  const EnergyProblem star = prob.with_metric(Metric::ab_star);
  const double rho = sampled_rho(star, cfg.seed);

  ThreeSolutionResult out(prob.grid());
  MountainPassOptions o1;
  o1.constraint = ConeConstraint::positive;
  o1.label = "u1";
  out.u1 = mountain_pass(star, cfg, o1);
  if (out.u1.sign_class != SignClass::positive || !(out.u1.min_value > 0.0)) out.u1.converged = false;

  MountainPassOptions o2;
  o2.constraint = ConeConstraint::negative;
  o2.label = "u2";
  out.u2 = mountain_pass(star, cfg, o2);
  if (out.u2.sign_class != SignClass::negative || !(out.u2.max_value < 0.0)) out.u2.converged = false;

  const int batch = std::max(1, thread_count());
  std::optional<SolutionReport> best_failure;
  for (int start = 0; start < cfg.u3_restarts && !out.sign_changing_found; start += batch) {
    const int count = std::min(batch, cfg.u3_restarts - start);
    std::vector<U3Attempt> attempts =
        ordered_map(count, [&](int k) { return sign_changing_attempt(star, cfg, start + k, rho); });
    for (U3Attempt& a : attempts) {
      ++out.u3_attempts;
      out.log.push_back(a.note);
      if (out.u3_attempts == 1) {
        out.path_lambda0 = a.lambda0;
        out.path_max_energy = a.path_max;
      }
      if (!a.report) continue;
      if (a.report->converged && a.report->sign_class == SignClass::sign_changing) {
        out.u3 = std::move(*a.report);
        out.path_lambda0 = a.lambda0;
        out.path_max_energy = a.path_max;
        out.sign_changing_found = true;
        break;
      }
      if (!best_failure) best_failure = std::move(*a.report);
    }
  }
  if (!out.sign_changing_found) {
    if (best_failure) out.u3 = std::move(*best_failure);
    out.u3.label = "u3";
    out.u3.converged = false;
    out.u3.status = "not found: every restart collapsed to a one-signed iterate or failed";
  }
  return out;
}

}  // namespace fhnvs
