#pragma once

#include "fhnvs/nonlocal.hpp"

namespace fhnvs {

struct ConeOptions {
  /// Restricted CG tolerance of each active-set sweep.
  double cg_tol = 1e-11;
  /// Inner S_b tolerance used while projecting.
  double inner_tol = 1e-12;
  int max_sweeps = 100;
  /// Certificate tolerance.
  double tol = 1e-8;
  /// Number of random nonnegative test directions in the polar clause.
  int polar_samples = 8;
};

/// The three clauses characterizing v = P_K u (Moreau):
/// v ≥ 0, ⟨u−v, v⟩* = 0, u−v ∈ K°. All values are relative.
struct MoreauCertificate {
  /// min v / max|u|
  double min_value = 0.0;
  /// |⟨u−v, v⟩*| / ‖u‖*²
  double orthogonality = 0.0;
  /// max_i (M*(u−v))_i / max|M* u|; K° is exactly M*(u−v) ≤ 0 nodewise.
  double polar_nodal = 0.0;
  /// max over sampled w ≥ 0 of ⟨u−v, w⟩* / (‖u‖* ‖w‖*)
  double polar_sampled = 0.0;
  bool passed = false;
};

struct ConeResult {
  /// P_K u
  Field pk;
  /// P_{K°} u = u − P_K u
  Field pko;
  int sweeps = 0;
  bool cycled = false;
  MoreauCertificate certificate;
};

/// Metric projection onto K = {u ≥ 0} in ⟨·,·⟩*_ab, solving the obstacle
/// problem min_{v ≥ 0} ‖u − v‖*² by a primal-dual active-set iteration.
class ConeProjection {
 public:
  /// Requires the star product (e ≥ 0).
  explicit ConeProjection(const ReducedOperator& op, ConeOptions options = {});

  const ConeOptions& options() const noexcept { return options_; }

  /// P_K u and its complement. With `certify`, also fills the certificate.
  ConeResult project(const Field& u, bool certify = true) const;
  /// P_{−K} u = −P_K(−u); the complement lies in (−K)° = −K°.
  ConeResult project_negative(const Field& u, bool certify = true) const;

  MoreauCertificate certificate(const Field& u, const Field& v) const;

 private:
  ReducedOperator op_;
  ConeOptions options_;
};

}  // namespace fhnvs
