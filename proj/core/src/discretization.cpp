#include "fhnvs/discretization.hpp"

#include <cmath>
#include <numbers>

#include "fhnvs/error.hpp"

namespace fhnvs {

void laplacian_apply(const Field& u, Field& out) {
  const Grid& g = u.grid();
  require_same_grid(g, out.grid(), "laplacian_apply");
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  const int n = g.n();
  const int dim = g.dim();
  const double diag = 2.0 * dim;
  const std::size_t size = g.size();
  std::array<std::size_t, 3> stride{g.stride(0), dim > 1 ? g.stride(1) : 0, dim > 2 ? g.stride(2) : 0};
  for (std::size_t i = 0; i < size; ++i) {
    double acc = diag * u[i];
    for (int k = 0; k < dim; ++k) {
      const int ik = static_cast<int>((i / stride[k]) % static_cast<std::size_t>(n));
      if (ik > 0) acc -= u[i - stride[k]];
      if (ik < n - 1) acc -= u[i + stride[k]];
    }
    out[i] = acc * inv_h2;
  }
}

Field laplacian_apply(const Field& u) {
  Field out(u.grid());
  laplacian_apply(u, out);
  return out;
}

double integrate(const Field& u) {
  double s = 0.0;
  for (double v : u.values()) s += v;
  return u.grid().quad_weight() * s;
}

double inner_l2(const Field& u, const Field& w) { return u.grid().quad_weight() * dot(u, w); }

double lp_norm(const Field& u, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("Lp norm requires p >= 1");
  double s = 0.0;
  for (double v : u.values()) s += std::pow(std::abs(v), p);
  return std::pow(u.grid().quad_weight() * s, 1.0 / p);
}

Norms norms(const Field& u, double p) {
  Norms out;
  out.l2 = std::sqrt(inner_l2(u, u));
  out.lp = lp_norm(u, p);
  out.h1_semi = std::sqrt(std::max(0.0, inner_l2(u, laplacian_apply(u))));
  return out;
}

double dual_norm(const Field& r) { return std::sqrt(inner_l2(r, r)); }

LinearOperator shifted_laplacian(const Field& shift) {
  return [shift](const Field& x, Field& y) {
    laplacian_apply(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += shift[i] * x[i];
  };
}

double box_laplacian_min_eigenvalue(const Grid& grid) {
  const double h = grid.spacing();
  const double s = std::sin(std::numbers::pi * h / (4.0 * grid.half_width()));
  return grid.dim() * 4.0 / (h * h) * s * s;
}

namespace {

void precondition(const std::optional<Field>& diag, const Field& r, Field& z) {
  if (!diag) {
    z = r;
    return;
  }
  for (std::size_t i = 0; i < r.size(); ++i) z[i] = r[i] / (*diag)[i];
}

}  // namespace

CgResult cg_solve(const LinearOperator& apply, const Field& rhs, const CgOptions& options) {
  const Grid& g = rhs.grid();
  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  CgResult result{Field(g), 0, 0.0};
  if (rhs_norm == 0.0) return result;

  Field& x = result.x;
  Field r = rhs;
  Field z(g);
  Field p(g);
  Field ap(g);
  const double target = options.tol * rhs_norm;
  int total = 0;

  // Outer loop restarts from the true residual whenever the recurrence
  // residual has drifted below the target but the true one has not.
  for (int restart = 0; restart < 8; ++restart) {
    precondition(options.jacobi_diagonal, r, z);
    p = z;
    double rz = dot(r, z);
    double rnorm = std::sqrt(dot(r, r));
    while (rnorm > target && total < options.max_iter) {
      apply(p, ap);
      const double curvature = dot(p, ap);
      if (!(curvature > 0.0)) throw NotSpdError(options.stage, curvature, total);
      const double alpha = rz / curvature;
      x.axpy(alpha, p);
      r.axpy(-alpha, ap);
      ++total;
      rnorm = std::sqrt(dot(r, r));
      if (rnorm <= target) break;
      precondition(options.jacobi_diagonal, r, z);
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    }
    apply(x, ap);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - ap[i];
    const double true_norm = std::sqrt(dot(r, r));
    result.iterations = total;
    result.relative_residual = true_norm / rhs_norm;
    if (true_norm <= target) return result;
    if (total >= options.max_iter) break;
  }
  throw SolveError(options.stage, "conjugate gradients did not converge", result.relative_residual,
                   result.iterations);
}

MinresResult minres_solve(const LinearOperator& apply, const Field& rhs, double tol, int max_iter) {
  // Paige-Saunders MINRES without preconditioning.
  const Grid& g = rhs.grid();
  MinresResult result{Field(g), 0, 0.0, false};
  const double beta1 = std::sqrt(dot(rhs, rhs));
  if (beta1 == 0.0) {
    result.converged = true;
    return result;
  }
  Field& x = result.x;
  Field v_old(g);
  Field v = rhs;
  v *= 1.0 / beta1;
  Field w(g), w_old(g), w_older(g), av(g);
  double c_old = 1.0, s_old = 0.0, c = 1.0, s = 0.0;
  double eta = beta1;
  double beta_prev = 0.0;
  for (int k = 1; k <= max_iter; ++k) {
    apply(v, av);
    const double alpha = dot(v, av);
    Field v_next = av;
    v_next.axpy(-alpha, v);
    v_next.axpy(-beta_prev, v_old);
    const double beta_next = std::sqrt(dot(v_next, v_next));

    // Apply previous rotations to the new column of the tridiagonal matrix.
    const double delta = c * alpha - c_old * s * beta_prev;
    const double rho2 = s * alpha + c_old * c * beta_prev;
    const double eps = s_old * beta_prev;
    const double gamma_hat = delta;
    const double rho1 = std::hypot(gamma_hat, beta_next);
    if (rho1 == 0.0) break;
    const double c_new = gamma_hat / rho1;
    const double s_new = beta_next / rho1;

    for (std::size_t i = 0; i < x.size(); ++i) {
      const double wi = (v[i] - rho2 * w_old[i] - eps * w_older[i]) / rho1;
      w_older[i] = w_old[i];
      w_old[i] = wi;
      x[i] += c_new * eta * wi;
    }
    eta = -s_new * eta;
    result.iterations = k;
    result.relative_residual = std::abs(eta) / beta1;

    c_old = c;
    s_old = s;
    c = c_new;
    s = s_new;
    beta_prev = beta_next;
    if (result.relative_residual <= tol) break;
    if (beta_next == 0.0) break;
    v_old = v;
    v = v_next;
    v *= 1.0 / beta_next;
  }
  // Report the true residual.
  apply(x, av);
  Field r = rhs;
  r -= av;
  result.relative_residual = std::sqrt(dot(r, r)) / beta1;
  result.converged = result.relative_residual <= tol * 10.0;
  return result;
}

}  // namespace fhnvs
