#include "fhnvs/cone.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fhnvs/error.hpp"
#include "fhnvs/random.hpp"

namespace fhnvs {

ConeProjection::ConeProjection(const ReducedOperator& op, ConeOptions options)
    : op_(op.with_inner_tol(options.inner_tol)), options_(options) {
  if (!op_.star_available()) throw CertificationError("cone projection requires e >= 0 (star product)");
  if (options_.max_sweeps < 1 || !(options_.cg_tol > 0.0) || !(options_.tol > 0.0)) {
    throw InvalidArgument("cone projection options must be positive");
  }
}

ConeResult ConeProjection::project(const Field& u, bool certify) const {
  require_same_grid(op_.grid(), u.grid(), "cone_project");
  const std::size_t n = u.size();
  ConeResult res{u, Field(u.grid()), 0, false, {}};
  if (u.min() >= 0.0) {
    if (certify) res.certificate = certificate(u, res.pk);
    return res;
  }

  const Field mu = op_.apply_forward_star(u);
  std::vector<char> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = u[i] < 0.0 ? 1 : 0;

  const auto restrict_to = [](const std::vector<char>& act, Field& f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (act[i]) f[i] = 0.0;
    }
  };

  std::set<std::vector<char>> seen;
  Field v(u.grid());
  for (int sweep = 1; sweep <= options_.max_sweeps; ++sweep) {
    res.sweeps = sweep;
    seen.insert(active);
    Field rhs = mu;
    restrict_to(active, rhs);
    Field x(u.grid());
    if (rhs.max_abs() > 0.0) {
      CgOptions cg;
      cg.tol = options_.cg_tol;
      cg.stage = "cone projection";
      const LinearOperator restricted = [this, &active, &restrict_to](const Field& in, Field& out) {
        Field tmp = in;
        restrict_to(active, tmp);
        out = op_.apply_forward_star(tmp);
        restrict_to(active, out);
      };
      x = cg_solve(restricted, rhs, cg).x;
    }
    v = x;
    const Field lambda = op_.apply_forward_star(v) - mu;
    std::vector<char> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = active[i] ? (lambda[i] > 0.0 ? 1 : 0) : (v[i] < 0.0 ? 1 : 0);
    if (next == active) break;
    if (seen.count(next) != 0) {
      res.cycled = true;
      break;
    }
    active = std::move(next);
  }
  // Clip roundoff-level negatives on the free set.
  for (std::size_t i = 0; i < n; ++i) v[i] = std::max(v[i], 0.0);
  res.pk = v;
  res.pko = u - v;
  if (certify) res.certificate = certificate(u, v);
  return res;
}

ConeResult ConeProjection::project_negative(const Field& u, bool certify) const {
  ConeResult r = project(-u, certify);
  r.pk *= -1.0;
  r.pko *= -1.0;
  return r;
}

MoreauCertificate ConeProjection::certificate(const Field& u, const Field& v) const {
  MoreauCertificate c;
  const Field mu = op_.apply_forward_star(u);
  const Field mcomp = mu - op_.apply_forward_star(v);
  const double umax = u.max_abs();
  const double unorm2 = inner_l2(mu, u);
  if (umax == 0.0) {
    c.passed = v.max_abs() == 0.0;
    return c;
  }
  c.min_value = v.min() / umax;
  c.orthogonality = std::abs(inner_l2(mcomp, v)) / unorm2;
  c.polar_nodal = mcomp.max() / mu.max_abs();
  Rng rng(0x5eedc0de);
  c.polar_sampled = -1.0;
  for (int k = 0; k < options_.polar_samples; ++k) {
    const Field w = random_smooth_field(u.grid(), rng, 4, true);
    const double wnorm = std::sqrt(inner_l2(op_.apply_forward_star(w), w));
    if (wnorm == 0.0) continue;
    c.polar_sampled = std::max(c.polar_sampled, inner_l2(mcomp, w) / (std::sqrt(unorm2) * wnorm));
  }
  c.polar_sampled = std::max(c.polar_sampled, 0.0);
  c.passed = c.min_value >= -options_.tol && c.orthogonality <= options_.tol && c.polar_nodal <= options_.tol &&
             c.polar_sampled <= options_.tol;
  return c;
}

}  // namespace fhnvs
