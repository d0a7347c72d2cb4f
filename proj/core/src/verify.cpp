#include "fhnvs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fhnvs/discretization.hpp"

namespace fhnvs {

std::string to_string(SignClass s) {
  switch (s) {
    case SignClass::positive:
      return "positive";
    case SignClass::negative:
      return "negative";
    case SignClass::sign_changing:
      return "sign_changing";
    case SignClass::zero:
      break;
  }
  return "zero";
}

WeakResidual weak_residual(const CoefficientSet& coeffs, const NonlinearitySpec& spec, const Field& u,
                           const Field& v) {
  require_same_grid(coeffs.grid(), u.grid(), "weak_residual u");
  require_same_grid(coeffs.grid(), v.grid(), "weak_residual v");
  Field r1 = laplacian_apply(u);
  Field r2 = laplacian_apply(v);
  for (std::size_t i = 0; i < u.size(); ++i) {
    r1[i] += coeffs.a()[i] * v[i] - spec.f(i, u[i]);
    r2[i] += coeffs.b()[i] * v[i] - coeffs.beta() * coeffs.a()[i] * u[i];
  }
  return {dual_norm(r1), dual_norm(r2)};
}

SignClass classify_sign(const Field& u, double tol_sign) {
  const double tol = tol_sign * std::max(u.max_abs(), std::numeric_limits<double>::min());
  const double lo = u.min();
  const double hi = u.max();
  if (lo < -tol && hi > tol) return SignClass::sign_changing;
  if (lo >= -tol && hi > tol) return SignClass::positive;
  if (hi <= tol && lo < -tol) return SignClass::negative;
  return SignClass::zero;
}

PsProxyReport ps_proxy(const std::vector<TraceEntry>& trace, double mu0) {
  PsProxyReport rep;
  const double k = 0.5 * mu0 - 1.0;
  for (const TraceEntry& t : trace) {
    ++rep.entries;
    rep.sup_norm_ab = std::max(rep.sup_norm_ab, t.norm_ab);
    const double lhs = k * t.norm_ab * t.norm_ab;
    const double rhs = mu0 * t.level + t.grad_norm * t.norm;
    const double slack = 1e-8 * std::max({std::abs(lhs), std::abs(mu0 * t.level), t.grad_norm * t.norm, 1e-300});
    if (!(lhs <= rhs + slack)) {
      ++rep.excursions;
      rep.excursion_iters.push_back(t.iter);
    }
  }
  rep.bounded = rep.excursions == 0;
  return rep;
}

SolutionReport certify_pair(const EnergyProblem& prob, const Field& u, const Field& v,
                            std::vector<TraceEntry> trace) {
  SolutionReport rep(prob.grid());
  rep.u = u;
  rep.v = v;
  rep.energy = prob.energy(u);
  rep.grad_norm = prob.norm(prob.gradient(u));
  rep.norm = prob.norm(u);
  const WeakResidual r = weak_residual(prob.op().coeffs(), prob.spec(), u, v);
  rep.residual_1 = r.r1;
  rep.residual_2 = r.r2;
  rep.sign_class = classify_sign(u);
  rep.min_value = u.min();
  rep.max_value = u.max();
  rep.v_min = v.min();
  rep.v_max = v.max();
  rep.ps = ps_proxy(trace, prob.spec().mu0);
  rep.trace = std::move(trace);
  return rep;
}

SolutionReport certify(const EnergyProblem& prob, const Field& u, std::vector<TraceEntry> trace) {
  return certify_pair(prob, u, prob.op().apply_Sb(u), std::move(trace));
}

}  // namespace fhnvs
