#pragma once

#include <string>
#include <vector>

#include "fhnvs/coefficients.hpp"
#include "fhnvs/energy.hpp"
#include "fhnvs/nonlinearity.hpp"

namespace fhnvs {

enum class SignClass { positive, negative, sign_changing, zero };

std::string to_string(SignClass s);

/// Default relative sign tolerance.
inline constexpr double kSignTol = 1e-10;

struct WeakResidual {
  double r1 = 0.0;
  double r2 = 0.0;
};

/// Residuals of the original two-field system in the discrete dual norm:
/// r1 = ‖−Δ_h u + a v − f(u)‖, r2 = ‖−Δ_h v + b v − βa u‖. Uses only the
/// stencil and pointwise operations, never the reduced operator.
WeakResidual weak_residual(const CoefficientSet& coeffs, const NonlinearitySpec& spec, const Field& u,
                           const Field& v);

/// positive: min ≥ −tol and max > tol; negative mirrored; sign_changing: min < −tol
/// and max > tol; zero otherwise. tol = tol_sign · max(max|u|, tiny).
SignClass classify_sign(const Field& u, double tol_sign = kSignTol);

struct TraceEntry {
  int iter = 0;
  double level = 0.0;
  /// Gradient norm and iterate norm in the solver metric.
  double grad_norm = 0.0;
  double norm = 0.0;
  double norm_ab = 0.0;
  double step = 0.0;
};

struct PsProxyReport {
  int entries = 0;
  int excursions = 0;
  std::vector<int> excursion_iters;
  double sup_norm_ab = 0.0;
  bool bounded = true;
};

/// Checks every trace entry against (μ₀/2 − 1)‖u‖²_ab ≤ μ₀J(u) + ‖DJ(u)‖‖u‖,
/// which holds for any u under the superlinearity hypothesis.
PsProxyReport ps_proxy(const std::vector<TraceEntry>& trace, double mu0);

struct SolutionReport {
  std::string label;
  Field u;
  Field v;
  double energy = 0.0;
  double grad_norm = 0.0;
  double norm = 0.0;
  double residual_1 = 0.0;
  double residual_2 = 0.0;
  SignClass sign_class = SignClass::zero;
  double min_value = 0.0;
  double max_value = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;
  std::vector<TraceEntry> trace;
  PsProxyReport ps;
  bool converged = false;
  std::string status;
  int iterations = 0;
  int newton_iterations = 0;
  double newton_residual = 0.0;
  bool newton_fallback = false;
  /// Largest J along the initial path; the minimax level cannot exceed it.
  double initial_path_max = 0.0;

  explicit SolutionReport(const Grid& grid) : u(grid), v(grid) {}
};

/// Recomputes v = S_b u, J, the gradient norm, residuals, sign class and the
/// PS proxy for a candidate solution.
SolutionReport certify(const EnergyProblem& prob, const Field& u, std::vector<TraceEntry> trace = {});

/// Same, with v supplied (e.g. loaded from disk).
SolutionReport certify_pair(const EnergyProblem& prob, const Field& u, const Field& v,
                            std::vector<TraceEntry> trace = {});

}  // namespace fhnvs
