#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fhnvs/cone.hpp"
#include "fhnvs/energy.hpp"
#include "fhnvs/verify.hpp"

namespace fhnvs {

struct SolverConfig {
  /// Samples per ray when locating the path maximum.
  int path_points = 21;
  /// Initial (and largest) descent step.
  double descent_step = 0.5;
  int max_outer_iters = 2000;
  /// Stop descent when ‖DJ‖_metric ≤ grad_tol.
  double grad_tol = 1e-6;
  /// Newton stops when the dual-norm residual ≤ newton_tol.
  double newton_tol = 1e-10;
  int newton_max_iters = 20;
  /// S_b tolerance inside Newton.
  double newton_inner_tol = 1e-12;
  /// Collapse threshold as a fraction of the sampled ρ.
  double rho_fraction = 0.1;
  std::uint64_t seed = 20240901;
  int u3_restarts = 5;
  /// Report stagnation when the level has not decreased for this many sweeps.
  int stagnation_sweeps = 50;

  /// Throws InvalidArgument on out-of-range values.
  void validate() const;
};

struct EndpointResult {
  Field g;
  double lambda0 = 1.0;
  int doublings = 0;
  /// J(g/2), the level one doubling before the crossover.
  double half_energy = 0.0;
  double energy = 0.0;
  /// (λ, J(λu₀)) along the search.
  std::vector<std::pair<double, double>> ladder;

  explicit EndpointResult(const Grid& grid) : g(grid) {}
};

/// Doubles λ from 1 until J(λu₀) < 0. Throws SolveError after 60 doublings.
EndpointResult find_endpoint_g(const EnergyProblem& prob, const Field& u0, const SolverConfig& cfg);

enum class ConeConstraint { none, positive, negative };

struct MountainPassOptions {
  /// Starting profile; defaults to a centred Gaussian bump of width L/4.
  std::optional<Field> start;
  /// Keep iterates in K (positive) or −K (negative) by projecting after each step.
  ConeConstraint constraint = ConeConstraint::none;
  bool newton = true;
  std::string label = "mountain_pass";
};

/// Path minimax: the path from 0 to g is the ray through the current
/// iterate; each sweep locates its maximum, takes an Armijo descent step from
/// the maximizer and re-peaks, accepting only level decreases. Converged
/// iterates are Newton-refined and certified.
SolutionReport mountain_pass(const EnergyProblem& prob, const SolverConfig& cfg,
                             const MountainPassOptions& options = {});

/// Sampled ρ of the mountain-pass geometry: J > 0 on ‖u‖_ab = ρ.
double sampled_rho(const EnergyProblem& prob, std::uint64_t seed, int samples = 16);

struct NewtonResult {
  Field u;
  int iterations = 0;
  double initial_residual = 0.0;
  double residual = 0.0;
  bool converged = false;
  bool fallback_used = false;
  bool degenerate = false;
  std::vector<double> history;
  std::string message;

  explicit NewtonResult(const Grid& grid) : u(grid) {}
};

/// Newton on R(u) = (−Δ_h + aS_b)u − f(u) with MINRES on the (indefinite)
/// linearization and a residual line search; gradient steps as fallback.
NewtonResult newton_refine(const EnergyProblem& prob, const Field& u, const SolverConfig& cfg);

/// Nodal residual R(u) and its dual norm.
Field newton_residual(const ReducedOperator& op, const NonlinearitySpec& spec, const Field& u);

struct ThreeSolutionResult {
  SolutionReport u1;
  SolutionReport u2;
  SolutionReport u3;
  bool sign_changing_found = false;
  int u3_attempts = 0;
  /// Scaling of the two-bump path and the largest J along it (negative).
  double path_lambda0 = 0.0;
  double path_max_energy = 0.0;
  std::vector<std::string> log;

  explicit ThreeSolutionResult(const Grid& g) : u1(g), u2(g), u3(g) {}
};

/// u₁ ∈ K and u₂ ∈ −K by cone-invariant mountain pass, u₃ by two-parameter
/// minimax over sign-changing iterates, all in the star metric. Requires
/// a > 0, e ≥ 0 and λ₁(d) > 0.
ThreeSolutionResult three_solutions(const EnergyProblem& prob, const SolverConfig& cfg);

}  // namespace fhnvs
