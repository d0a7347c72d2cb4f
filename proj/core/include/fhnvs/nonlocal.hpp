#pragma once

#include <cstdint>

#include "fhnvs/coefficients.hpp"
#include "fhnvs/discretization.hpp"

namespace fhnvs {

struct ReducedOptions {
  double inner_tol = 1e-10;
  int inner_max_iter = 20000;
};

/// The reduced operator algebra for a certified coefficient set: S_b, the
/// three inner products and the factorized inverse of -Δ + aS_b + e.
/// Immutable; safe to share across threads.
class ReducedOperator {
 public:
  /// Throws CertificationError unless λ₁(b) > kCertificationTol.
  explicit ReducedOperator(CoefficientSet coeffs, ReducedOptions options = {});

  const CoefficientSet& coeffs() const noexcept { return coeffs_; }
  const Grid& grid() const noexcept { return coeffs_.grid(); }
  const ReducedOptions& options() const noexcept { return options_; }
  double lambda1_b() const noexcept { return lambda1_b_; }
  double lambda1_d() const noexcept { return lambda1_d_; }
  const Field& e() const noexcept { return e_; }
  const Field& d() const noexcept { return d_; }

  /// e ≥ 0: the star product is available.
  bool star_available() const noexcept { return star_; }
  /// a > 0, e ≥ 0 and λ₁(d) > 0: the factorized inverse is available.
  bool factorization_available() const noexcept { return factorization_; }

  /// Same coefficients and certificates, different inner tolerance.
  ReducedOperator with_inner_tol(double tol) const;

  /// S_b u = β (-Δ_h + b)^{-1}(a u).
  Field apply_Sb(const Field& u) const;
  /// (-Δ_h + b)^{-1} w
  Field solve_b(const Field& w) const;
  /// (-Δ_h + d)^{-1} w; requires the factorization certificate.
  Field solve_d(const Field& w) const;

  /// -Δ_h u + a S_b u
  Field apply_forward(const Field& u) const;
  /// -Δ_h u + a S_b u + e u
  Field apply_forward_star(const Field& u) const;
  /// (-Δ_h + aS_b + e)^{-1} w = (I + √β (-Δ_h+d)^{-1} a)(-Δ_h+d)^{-1} w.
  Field factorized_inverse(const Field& w) const;

  double inner_b(const Field& u, const Field& w) const;
  double inner_ab(const Field& u, const Field& w) const;
  /// Requires e ≥ 0.
  double inner_ab_star(const Field& u, const Field& w) const;

 private:
  ReducedOperator(const ReducedOperator& base, ReducedOptions options);
  void require_star(const char* what) const;
  void require_factorization(const char* what) const;
  Field solve(const Field& shift, const Field& rhs, const char* stage) const;

  CoefficientSet coeffs_;
  ReducedOptions options_;
  Field e_;
  Field d_;
  double lambda1_b_ = 0.0;
  double lambda1_d_ = 0.0;
  bool star_ = false;
  bool factorization_ = false;
};

struct NormIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};

/// ‖u‖²_ab against ‖∇u‖² + β⁻¹‖S_b u‖²_b.
NormIdentity norm_ab_identity_check(const ReducedOperator& op, const Field& u);

struct MaxPrincipleReport {
  int trials = 0;
  /// Trials where the factorized inverse went below −tol_sign.
  int violations_factorized = 0;
  /// Trials where (-Δ_h + b)^{-1} went below −tol_sign.
  int violations_b = 0;
  /// Trials where the minimum was not strictly above tol_sign.
  int not_strict_factorized = 0;
  int not_strict_b = 0;
  /// Smallest nodal value over the trials, relative to max|u|.
  double worst_min_factorized = 0.0;
  double worst_min_b = 0.0;
};

/// Applies both inverses to random nonnegative loads and records sign
/// violations; violations are data, not errors.
MaxPrincipleReport maxprinciple_check(const ReducedOperator& op, int trials, std::uint64_t seed);

}  // namespace fhnvs
