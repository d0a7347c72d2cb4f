#include "fhnvs/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "fhnvs/error.hpp"
#include "fhnvs/parallel.hpp"
#include "fhnvs/random.hpp"

namespace fhnvs {

DomainMask::DomainMask(const Grid& grid, std::vector<char> active) : grid_(grid), active_(std::move(active)) {
  if (active_.size() != grid_.size()) throw GridMismatch("mask size does not match grid");
  count_ = static_cast<std::size_t>(std::count_if(active_.begin(), active_.end(), [](char c) { return c != 0; }));
}

DomainMask DomainMask::full(const Grid& grid) { return DomainMask(grid, std::vector<char>(grid.size(), 1)); }

DomainMask DomainMask::ball(const Grid& grid, const Point& center, double radius) {
  std::vector<char> active(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.coord(i);
    double r2 = 0.0;
    for (int k = 0; k < grid.dim(); ++k) r2 += (x[k] - center[k]) * (x[k] - center[k]);
    active[i] = std::sqrt(r2) < radius ? 1 : 0;
  }
  return DomainMask(grid, std::move(active));
}

DomainMask DomainMask::exterior(const Grid& grid, double radius) {
  std::vector<char> active(grid.size(), 0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.coord(i);
    double r2 = 0.0;
    for (int k = 0; k < grid.dim(); ++k) r2 += x[k] * x[k];
    active[i] = std::sqrt(r2) > radius ? 1 : 0;
  }
  return DomainMask(grid, std::move(active));
}

void DomainMask::restrict(Field& f) const noexcept {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (active_[i] == 0) f[i] = 0.0;
  }
}

bool DomainMask::subset_of(const DomainMask& other) const noexcept {
  for (std::size_t i = 0; i < active_.size(); ++i) {
    if (active_[i] != 0 && other.active_[i] == 0) return false;
  }
  return true;
}

LinearOperator masked_schrodinger(const Field& sigma, const DomainMask& mask) {
  require_same_grid(sigma.grid(), mask.grid(), "masked operator");
  return [sigma, mask](const Field& x, Field& y) {
    Field xm = x;
    mask.restrict(xm);
    laplacian_apply(xm, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = mask.active(i) ? y[i] + sigma[i] * xm[i] : 0.0;
  };
}

namespace {

// A shift strictly below the spectrum of -Δ_h + σ on any mask:
// λ_min(-Δ_h, box) + min σ is a lower bound by domain monotonicity.
double spectral_lower_shift(const Field& sigma, const DomainMask& mask) {
  double smin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (mask.active(i)) smin = std::min(smin, sigma[i]);
  }
  const double lap = box_laplacian_min_eigenvalue(sigma.grid());
  const double margin = std::max(1e-3, 0.05 * lap);
  return lap + smin - margin;
}

LinearOperator shifted_masked(const Field& sigma, const DomainMask& mask, double shift) {
  LinearOperator base = masked_schrodinger(sigma, mask);
  return [base, mask, shift](const Field& x, Field& y) {
    base(x, y);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (mask.active(i)) y[i] -= shift * x[i];
    }
  };
}

void normalize_euclid(Field& x) { x *= 1.0 / std::sqrt(dot(x, x)); }

}  // namespace

EigenPair lowest_eigenpair(const Field& sigma, const DomainMask& mask, const EigenOptions& options) {
  if (mask.empty()) throw InvalidArgument("lambda1: empty mask");
  require_same_grid(sigma.grid(), mask.grid(), "lambda1");
  const Grid& g = sigma.grid();
  const double shift = spectral_lower_shift(sigma, mask);
  const LinearOperator op = masked_schrodinger(sigma, mask);
  const LinearOperator shifted = shifted_masked(sigma, mask, shift);
  CgOptions cg;
  cg.tol = options.cg_tol;
  cg.stage = "lambda1 shift-invert solve";

  EigenPair out{0.0, Field(g, 1.0), 0, 0.0};
  Field& x = out.vector;
  mask.restrict(x);
  normalize_euclid(x);
  Field ax(g);
  for (int it = 1; it <= options.max_iter; ++it) {
    x = cg_solve(shifted, x, cg).x;
    normalize_euclid(x);
    op(x, ax);
    const double rho = dot(x, ax);
    ax.axpy(-rho, x);
    out.value = rho;
    out.residual = std::sqrt(dot(ax, ax));
    out.iterations = it;
    if (out.residual <= options.tol * std::max(1.0, std::abs(rho))) {
      double sum = 0.0;
      for (double v : x.values()) sum += v;
      if (sum < 0.0) x *= -1.0;
      return out;
    }
  }
  throw SolveError("lambda1", "inverse power iteration did not converge", out.residual, out.iterations);
}

double lambda1(const Field& sigma, const DomainMask& mask, const EigenOptions& options) {
  return lowest_eigenpair(sigma, mask, options).value;
}

double lambda1(const Field& sigma, const EigenOptions& options) {
  return lambda1(sigma, DomainMask::full(sigma.grid()), options);
}

double nu_quotient(const Field& sigma, const DomainMask& mask, const Field& u, double s) {
  Field um = u;
  mask.restrict(um);
  Field au(u.grid());
  masked_schrodinger(sigma, mask)(um, au);
  const double num = inner_l2(um, au);
  const double den = std::pow(lp_norm(um, s), 2.0);
  return num / den;
}

namespace {

struct DescentOutcome {
  double value;
  Field u;
  bool stagnated;
};

// L_s normalization: h^d Σ |u|^s = 1.
void normalize_ls(Field& u, double s) { u *= 1.0 / lp_norm(u, s); }

DescentOutcome descend_on_sphere(const Field& sigma, const DomainMask& mask, double s, Field u,
                                 const NuOptions& options, const LinearOperator& op,
                                 const LinearOperator& precond_op) {
  const Grid& g = sigma.grid();
  const double w = g.quad_weight();
  CgOptions cg;
  cg.tol = 1e-10;
  cg.stage = "nu_s preconditioner solve";

  mask.restrict(u);
  normalize_ls(u, s);
  Field au(g);
  op(u, au);
  double q = w * dot(u, au);
  double tau = 1.0;
  for (int it = 0; it < options.max_iter; ++it) {
    // Nodal gradient direction of the quotient on the sphere ‖u‖_s = 1.
    Field r = au;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (mask.active(i)) r[i] -= q * std::pow(std::abs(u[i]), s - 2.0) * u[i];
    }
    Field dir = cg_solve(precond_op, r, cg).x;
    dir *= -1.0;
    const double slope = 2.0 * w * dot(r, dir);
    const double scale = std::max(1.0, q * q);
    if (-slope <= options.tol * options.tol * scale) return {q, u, false};
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Field trial = u;
      trial.axpy(tau, dir);
      normalize_ls(trial, s);
      Field atrial(g);
      op(trial, atrial);
      const double qt = w * dot(trial, atrial);
      if (qt <= q + 1e-4 * tau * slope) {
        u = std::move(trial);
        au = std::move(atrial);
        q = qt;
        accepted = true;
        tau = std::min(1.0, 2.0 * tau);
        break;
      }
      tau *= 0.5;
    }
    // A failed line search at roundoff level is convergence, not stagnation.
    if (!accepted) return {q, u, -slope > 1e-14 * scale};
  }
  return {q, u, true};
}

}  // namespace

NuResult nu_s(const Field& sigma, const DomainMask& mask, double s, const NuOptions& options) {
  require_same_grid(sigma.grid(), mask.grid(), "nu_s");
  const Grid& g = sigma.grid();
  if (!(s >= 2.0)) throw InvalidArgument("nu_s requires s >= 2");
  NuResult out(g);
  if (g.dim() >= 3) {
    const double crit = 2.0 * g.dim() / (g.dim() - 2.0);
    if (!(s < crit)) throw InvalidArgument("nu_s requires s < 2* = " + std::to_string(crit));
  } else {
    out.formal = true;
  }
  if (mask.empty()) return out;

  const EigenPair ground = lowest_eigenpair(sigma, mask);
  if (s == 2.0) {
    out.minimizer = ground.vector;
    normalize_ls(out.minimizer, 2.0);
    out.value = nu_quotient(sigma, mask, out.minimizer, 2.0);
    out.restart_values = {out.value};
    return out;
  }

  // Sobolev preconditioner A − λ₁ + c: as well conditioned as -Δ_h.
  const LinearOperator op = masked_schrodinger(sigma, mask);
  const double shift = ground.value - std::max(std::abs(ground.value), box_laplacian_min_eigenvalue(g));
  const LinearOperator precond = shifted_masked(sigma, mask, shift);

  const int restarts = std::max(1, options.restarts);
  auto outcomes = ordered_map(restarts, [&](int k) {
    Field start(g);
    if (k == 0) {
      if (options.initial) {
        start = *options.initial;
      } else {
        start = ground.vector;
        for (double& v : start.values()) v = std::abs(v);
      }
    } else {
      Rng rng(options.seed + 7919ULL * static_cast<std::uint64_t>(k));
      start = random_smooth_field(g, rng, 4, k % 2 == 1);
      start.axpy(rng.uniform(0.05, 0.5), random_nodal_field(g, rng, 0.0, 1.0));
    }
    mask.restrict(start);
    if (dot(start, start) == 0.0) start = ground.vector;
    return descend_on_sphere(sigma, mask, s, std::move(start), options, op, precond);
  });

  std::size_t best = 0;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    out.restart_values.push_back(outcomes[k].value);
    if (outcomes[k].value < outcomes[best].value) best = k;
  }
  out.minimizer = outcomes[best].u;
  out.stagnated = outcomes[best].stagnated;
  out.value = nu_quotient(sigma, mask, out.minimizer, s);
  return out;
}

bool non_decreasing(const std::vector<double>& values, double rel_slack) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (std::isinf(values[i])) continue;
    if (values[i] < values[i - 1] - rel_slack * std::max(1.0, std::abs(values[i - 1]))) return false;
  }
  return true;
}

ClassReport shifted_ball_diagnostic(const Field& sigma, double radius, const std::vector<Point>& centers,
                                    const std::vector<double>& ladder, double s, const NuOptions& options) {
  const Grid& g = sigma.grid();
  ClassReport report;
  report.s = s;
  report.lambda1 = lambda1(sigma);
  report.lambda1_positive = report.lambda1 > kCertificationTol;
  std::vector<double> march;
  for (const Point& c : centers) {
    const DomainMask mask = DomainMask::ball(g, c, radius);
    const NuResult r = nu_s(sigma, mask, s, options);
    report.formal = report.formal || r.formal;
    NuSample sample{"ball", c, radius, r.value};
    report.nu_values.push_back(sample);
    march.push_back(r.value);
  }
  report.nu_trend_increasing = !march.empty() && non_decreasing(march);
  std::vector<double> ext;
  for (double rho : ladder) {
    const DomainMask mask = DomainMask::exterior(g, rho);
    const NuResult r = nu_s(sigma, mask, s, options);
    report.formal = report.formal || r.formal;
    report.exterior_values.push_back(NuSample{"exterior", Point{0.0, 0.0, 0.0}, rho, r.value});
    ext.push_back(r.value);
  }
  report.exterior_trend_increasing = !ext.empty() && non_decreasing(ext);
  return report;
}

double sigma_plus_norm(const Field& u, const Field& sigma) {
  require_same_grid(u.grid(), sigma.grid(), "sigma_plus_norm");
  double pot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) pot += std::max(sigma[i], 0.0) * u[i] * u[i];
  pot *= u.grid().quad_weight();
  return std::sqrt(inner_l2(u, laplacian_apply(u)) + pot);
}

RatioEnvelope norm_equivalence_diagnostic(const Field& a, const Field& b, int trials, std::uint64_t seed) {
  require_same_grid(a.grid(), b.grid(), "norm_equivalence_diagnostic");
  Rng rng(seed);
  RatioEnvelope env{std::numeric_limits<double>::infinity(), 0.0, 0};
  while (env.trials < trials) {
    const Field u = random_smooth_field(a.grid(), rng);
    const double na = sigma_plus_norm(u, a);
    const double nb = sigma_plus_norm(u, b);
    if (!(na > 0.0) || !(nb > 0.0)) continue;
    const double ratio = na / nb;
    env.min_ratio = std::min(env.min_ratio, ratio);
    env.max_ratio = std::max(env.max_ratio, ratio);
    ++env.trials;
  }
  return env;
}

}  // namespace fhnvs
