#pragma once

#include <cstdint>
#include <string>

#include "fhnvs/nonlinearity.hpp"
#include "fhnvs/nonlocal.hpp"

namespace fhnvs {

enum class Metric { ab, ab_star };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);

struct EnergyOptions {
  /// Outer CG tolerance of the ab-metric Riesz solve.
  double outer_tol = 1e-8;
  int outer_max_iter = 20000;
};

/// J(u) = ½‖u‖²_ab − Ψ(u), Ψ(u) = ∫F(x,u), with gradients as Riesz
/// representatives in the selected metric.
class EnergyProblem {
 public:
  /// The ab_star metric requires the factorization certificate.
  EnergyProblem(ReducedOperator op, NonlinearitySpec spec, Metric metric = Metric::ab, EnergyOptions options = {});

  const ReducedOperator& op() const noexcept { return op_; }
  const NonlinearitySpec& spec() const noexcept { return spec_; }
  Metric metric() const noexcept { return metric_; }
  const EnergyOptions& options() const noexcept { return options_; }
  const Grid& grid() const noexcept { return op_.grid(); }

  /// Same problem in another metric.
  EnergyProblem with_metric(Metric metric) const;
  /// Same problem with different inner and outer tolerances.
  EnergyProblem with_tolerances(double inner_tol, double outer_tol) const;

  /// J(u); in the star metric computed as ½‖u‖*² − Ψ̃(u).
  double energy(const Field& u) const;
  double energy_ab_form(const Field& u) const;
  double energy_star_form(const Field& u) const;

  double psi(const Field& u) const;
  /// Ψ̃(u) = Ψ(u) + ½∫e u²
  double psi_tilde(const Field& u) const;

  /// Nodal load f(·,u); against nodal test vectors h^d Σ load_i h_i = ∫ f h.
  Field load(const Field& u) const;
  /// r with ⟨r, h⟩_metric = ∫ w h for all h.
  Field riesz(const Field& w) const;
  /// Riesz representative of DJ(u): u − riesz(f(u)) in ab,
  /// u − A(u) in ab_star.
  Field gradient(const Field& u) const;
  /// A(u) = (−Δ + aS_b + e)^{-1}(f(u) + e u); star metric only.
  Field map_A(const Field& u) const;

  double inner(const Field& u, const Field& w) const;
  double norm(const Field& u) const;

 private:
  ReducedOperator op_;
  NonlinearitySpec spec_;
  Metric metric_;
  EnergyOptions options_;
};

struct WethReport {
  int samples = 0;
  /// ⟨A(u),u⟩* − ∫e u² ≥ μ₀Ψ(u); worst relative margin (≥ 0 passes).
  bool a21_passed = false;
  double a21_worst_margin = 0.0;
  /// Smallest C* making the literal ⟨A(u),u⟩* ≥ μ₀Ψ̃(u) − C* hold on the samples.
  double a21_literal_cstar = 0.0;
  /// C_* = sup ‖u‖*² / ‖u‖²_ab (power iteration) and q_* = sqrt(1 − 1/C_*).
  double c_star_norm = 1.0;
  double q_lower = 0.0;
  /// Fitted q^* with ℓ = p.
  double q_upper = 0.0;
  double ell = 0.0;
  /// max ‖A(u)‖*/‖u‖* over small-scale samples; must not exceed q_*.
  double small_scale_ratio = 0.0;
  bool a22_passed = false;
  /// Worst relative excess of ⟨A(u),v⟩* over ⟨A(P_{K°}u),v⟩*, v ∈ K°.
  bool a3_passed = false;
  double a3_worst = 0.0;
  bool a4_passed = false;
  double a4_worst = 0.0;
  bool all_passed() const noexcept { return a21_passed && a22_passed && a3_passed && a4_passed; }
};

/// Sampled checks of the abstract three-critical-point hypotheses for the
/// star-metric formulation. Failures are report content.
WethReport weth_checks(const EnergyProblem& prob, int samples, std::uint64_t seed);

}  // namespace fhnvs
