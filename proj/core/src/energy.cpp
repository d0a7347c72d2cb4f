#include "fhnvs/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fhnvs/cone.hpp"
#include "fhnvs/error.hpp"
#include "fhnvs/random.hpp"

namespace fhnvs {

std::string to_string(Metric m) { return m == Metric::ab ? "ab" : "ab_star"; }

Metric metric_from_string(const std::string& s) {
  if (s == "ab") return Metric::ab;
  if (s == "ab_star") return Metric::ab_star;
  throw InvalidArgument("unknown metric '" + s + "' (expected ab or ab_star)");
}

EnergyProblem::EnergyProblem(ReducedOperator op, NonlinearitySpec spec, Metric metric, EnergyOptions options)
    : op_(std::move(op)), spec_(std::move(spec)), metric_(metric), options_(options) {
  require_same_grid(op_.grid(), spec_.phi.grid(), "EnergyProblem");
  if (!spec_.f || !spec_.F || !spec_.fu) throw InvalidArgument("nonlinearity callables must be set");
  if (!(options_.outer_tol > 0.0)) throw InvalidArgument("outer tolerance must be positive");
  if (metric_ == Metric::ab_star && !op_.factorization_available()) {
    throw CertificationError("ab_star metric requires a > 0, e >= 0 and lambda1(d) > 0");
  }
}

EnergyProblem EnergyProblem::with_metric(Metric metric) const { return EnergyProblem(op_, spec_, metric, options_); }

EnergyProblem EnergyProblem::with_tolerances(double inner_tol, double outer_tol) const {
  EnergyOptions opts = options_;
  opts.outer_tol = outer_tol;
  return EnergyProblem(op_.with_inner_tol(inner_tol), spec_, metric_, opts);
}

double EnergyProblem::psi(const Field& u) const { return integrate(apply_F(spec_, u)); }

double EnergyProblem::psi_tilde(const Field& u) const {
  return psi(u) + 0.5 * inner_l2(hadamard(op_.e(), u), u);
}

double EnergyProblem::energy_ab_form(const Field& u) const { return 0.5 * op_.inner_ab(u, u) - psi(u); }

double EnergyProblem::energy_star_form(const Field& u) const {
  return 0.5 * op_.inner_ab_star(u, u) - psi_tilde(u);
}

double EnergyProblem::energy(const Field& u) const {
  return metric_ == Metric::ab ? energy_ab_form(u) : energy_star_form(u);
}

Field EnergyProblem::load(const Field& u) const { return apply_f(spec_, u); }

Field EnergyProblem::riesz(const Field& w) const {
  require_same_grid(grid(), w.grid(), "riesz");
  if (metric_ == Metric::ab_star) return op_.factorized_inverse(w);
  if (w.max_abs() == 0.0) return Field(grid());
  CgOptions cg;
  cg.tol = options_.outer_tol;
  cg.max_iter = options_.outer_max_iter;
  cg.stage = "ab-metric gradient";
  const LinearOperator forward = [this](const Field& x, Field& y) { y = op_.apply_forward(x); };
  return cg_solve(forward, w, cg).x;
}

Field EnergyProblem::map_A(const Field& u) const {
  if (metric_ != Metric::ab_star) throw InvalidArgument("map_A is defined in the ab_star metric");
  Field w = load(u);
  w += hadamard(op_.e(), u);
  return op_.factorized_inverse(w);
}

Field EnergyProblem::gradient(const Field& u) const {
  if (metric_ == Metric::ab_star) return u - map_A(u);
  return u - riesz(load(u));
}

double EnergyProblem::inner(const Field& u, const Field& w) const {
  return metric_ == Metric::ab ? op_.inner_ab(u, w) : op_.inner_ab_star(u, w);
}

double EnergyProblem::norm(const Field& u) const { return std::sqrt(std::max(inner(u, u), 0.0)); }

namespace {

/// sup ‖u‖*²/‖u‖²_ab = 1 + largest eigenvalue of M_ab^{-1} diag(e).
double star_norm_constant(const EnergyProblem& ab, Rng& rng) {
  Field x = random_smooth_field(ab.grid(), rng, 6, true);
  x += Field(ab.grid(), 1e-3);
  double rho = 0.0;
  for (int it = 0; it < 60; ++it) {
    const Field y = ab.riesz(hadamard(ab.op().e(), x));
    const double num = inner_l2(hadamard(ab.op().e(), x), x);
    const double den = ab.op().inner_ab(x, x);
    const double next = den > 0.0 ? num / den : 0.0;
    const double ymax = y.max_abs();
    if (ymax == 0.0) break;
    x = (1.0 / ymax) * y;
    if (it > 5 && std::abs(next - rho) <= 1e-10 * std::max(1.0, std::abs(next))) {
      rho = next;
      break;
    }
    rho = next;
  }
  return 1.0 + rho;
}

}  // namespace

WethReport weth_checks(const EnergyProblem& prob, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("weth_checks requires samples >= 1");
  const EnergyProblem star = prob.with_metric(Metric::ab_star);
  const EnergyProblem ab = prob.with_metric(Metric::ab);
  const ConeProjection cone(prob.op());
  const Field& e = prob.op().e();
  const double mu0 = prob.spec().mu0;
  Rng rng(seed);

  WethReport rep;
  rep.samples = samples;
  rep.a21_passed = true;
  rep.a21_worst_margin = std::numeric_limits<double>::infinity();
  rep.c_star_norm = star_norm_constant(ab, rng);
  rep.q_lower = std::sqrt(std::max(0.0, 1.0 - 1.0 / rep.c_star_norm));
  rep.ell = prob.spec().p;
  rep.a3_passed = true;
  rep.a4_passed = true;
  rep.a3_worst = -std::numeric_limits<double>::infinity();
  rep.a4_worst = -std::numeric_limits<double>::infinity();

  const auto star_pairing = [&](const Field& u, const Field& v) {
    // ⟨A(u), v⟩* = ∫ (f(u) + e u) v
    return inner_l2(star.load(u) + hadamard(e, u), v);
  };

  for (int s = 0; s < samples; ++s) {
    const double scale = std::pow(10.0, rng.uniform(-3.0, 0.5));
    const Field u = scale * random_smooth_field(prob.grid(), rng, 6, false);
    if (u.max_abs() == 0.0) continue;

    // (A₂.1) via DΨ(u)u ≥ μ₀Ψ(u) plus the exact e-term.
    const double pair = star_pairing(u, u);
    const double eterm = inner_l2(hadamard(e, u), u);
    const double psi = star.psi(u);
    const double margin = (pair - eterm - mu0 * psi) / std::max(std::abs(pair), 1e-300);
    rep.a21_worst_margin = std::min(rep.a21_worst_margin, margin);
    if (margin < -1e-12) rep.a21_passed = false;
    rep.a21_literal_cstar = std::max(rep.a21_literal_cstar, mu0 * star.psi_tilde(u) - pair);

    // (A₂.2): ‖A(u)‖* ≤ q_*‖u‖* + q^*‖u‖*^ℓ.
    const Field au = star.map_A(u);
    const double au_norm = star.norm(au);
    const double u_norm = star.norm(u);
    rep.q_upper = std::max(rep.q_upper, (au_norm - rep.q_lower * u_norm) / std::pow(u_norm, rep.ell));
    const Field tiny = (1e-6 / u.max_abs()) * u;
    rep.small_scale_ratio = std::max(rep.small_scale_ratio, star.norm(star.map_A(tiny)) / star.norm(tiny));

    // (A₃) with v = −(M*)^{-1} w ∈ K°, (A₄) with v ∈ (−K)° = −K°.
    const Field w = random_smooth_field(prob.grid(), rng, 4, true);
    const Field v_polar = -prob.op().factorized_inverse(w);
    const Field p_polar = cone.project(u, false).pko;
    const double lhs3 = star_pairing(u, v_polar);
    const double rhs3 = star_pairing(p_polar, v_polar);
    const double scale3 = std::max({std::abs(lhs3), std::abs(rhs3), 1e-300});
    const double excess3 = (lhs3 - rhs3) / scale3;
    rep.a3_worst = std::max(rep.a3_worst, excess3);
    if (excess3 > 1e-8) rep.a3_passed = false;

    const Field v_neg = -v_polar;
    const Field p_neg = cone.project_negative(u, false).pko;
    const double lhs4 = star_pairing(u, v_neg);
    const double rhs4 = star_pairing(p_neg, v_neg);
    const double scale4 = std::max({std::abs(lhs4), std::abs(rhs4), 1e-300});
    const double excess4 = (lhs4 - rhs4) / scale4;
    rep.a4_worst = std::max(rep.a4_worst, excess4);
    if (excess4 > 1e-8) rep.a4_passed = false;
  }
  rep.q_upper = std::max(rep.q_upper, 0.0);
  rep.a22_passed = rep.q_lower < 1.0 && rep.small_scale_ratio <= rep.q_lower * (1.0 + 1e-6) + 1e-9;
  return rep;
}

}  // namespace fhnvs
