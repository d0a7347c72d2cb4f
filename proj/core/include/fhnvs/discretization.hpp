#pragma once

#include <functional>
#include <optional>
#include <string>

#include "fhnvs/grid.hpp"

namespace fhnvs {

/// out = -Δ_h u with zero Dirichlet ghost values (positive semidefinite sign).
void laplacian_apply(const Field& u, Field& out);
Field laplacian_apply(const Field& u);

/// Midpoint quadrature h^d Σ u_i.
double integrate(const Field& u);
/// integrate(u * w)
double inner_l2(const Field& u, const Field& w);

struct Norms {
  double l2 = 0.0;
  double lp = 0.0;
  double h1_semi = 0.0;
};

/// L2, Lp and discrete H1-seminorm; h1_semi^2 = integrate(u * (-Δ_h u)).
Norms norms(const Field& u, double p = 2.0);
double lp_norm(const Field& u, double p);

/// Discrete dual norm sqrt(h^d Σ r_i^2) of a nodal residual.
double dual_norm(const Field& r);

/// y = A x. Implementations must not alias x and y.
using LinearOperator = std::function<void(const Field& x, Field& y)>;

/// y = -Δ_h x + shift ∘ x
LinearOperator shifted_laplacian(const Field& shift);

struct CgOptions {
  double tol = 1e-10;
  int max_iter = 20000;
  /// Optional Jacobi preconditioner: the operator diagonal.
  std::optional<Field> jacobi_diagonal;
  /// Label used in error messages.
  std::string stage = "cg";
};

struct CgResult {
  Field x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Conjugate gradients for SPD operators. Guarantees the true residual
/// ‖A x − rhs‖ ≤ tol ‖rhs‖; throws SolveError on non-convergence and
/// NotSpdError on non-positive curvature.
CgResult cg_solve(const LinearOperator& apply, const Field& rhs, const CgOptions& options = {});

struct MinresResult {
  Field x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// MINRES for symmetric (possibly indefinite) operators. Never throws on
/// non-convergence; inspect `converged`.
MinresResult minres_solve(const LinearOperator& apply, const Field& rhs, double tol, int max_iter);

/// Smallest eigenvalue of -Δ_h on the full box: Σ_k (4/h^2) sin^2(π h / 4L).
double box_laplacian_min_eigenvalue(const Grid& grid);

}  // namespace fhnvs
