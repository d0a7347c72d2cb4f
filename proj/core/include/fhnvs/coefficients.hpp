#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "fhnvs/grid.hpp"

namespace fhnvs {

/// Coefficient data of the system: a, b, c = βa, weight φ and optional ϑ.
/// c is never stored; e = b − 2√β a and d = b − √β a are derived on demand.
class CoefficientSet {
 public:
  CoefficientSet(Field a, Field b, double beta, std::optional<Field> phi = std::nullopt,
                 std::optional<Field> theta = std::nullopt);

  const Grid& grid() const noexcept { return a_.grid(); }
  const Field& a() const noexcept { return a_; }
  const Field& b() const noexcept { return b_; }
  double beta() const noexcept { return beta_; }
  const Field& phi() const noexcept { return phi_; }
  const std::optional<Field>& theta() const noexcept { return theta_; }

  Field c() const;
  Field e() const;
  Field d() const;

  bool a_positive() const noexcept;
  bool e_nonnegative() const;

 private:
  Field a_;
  Field b_;
  double beta_;
  Field phi_;
  std::optional<Field> theta_;
};

CoefficientSet constant_coeffs(const Grid& grid, double a0, double b0, double beta);

/// Non-coercive sign-changing coefficient: −μ_r/(2r) on |z| ≤ r/2,
/// 1 + κ²(1+|x₁|)²|y|² on |z| ≥ r (z = (x₁, y)), and the linear radial blend
/// between the two on the ring, clamped below by −μ_r/(2r).
Field example_sigma(const Grid& grid, double r, double kappa, double mu_r);

/// Smallest Dirichlet eigenvalue of -Δ_h on the masked ball B_{2r}(0).
double poincare_mu(const Grid& grid, double r);

/// Standard Gaussian density (2π)^{-d/2} exp(−|x|²/2).
Field gaussian_sigma(const Grid& grid);

struct PairedCoefficients {
  Field a;
  Field b;
  double mu_r1 = 0.0;
  double mu_r2 = 0.0;
};

/// a = example_sigma(r1, κ1), b = example_sigma(r2, κ2), each with its own μ_r.
PairedCoefficients paired_class_coeffs(const Grid& grid, double r1, double kappa1, double r2, double kappa2);

Field load_field(const Grid& grid, const std::filesystem::path& path);
Field derive_e(const CoefficientSet& cs);
Field derive_d(const CoefficientSet& cs);

/// Flat indices where the field is negative.
std::vector<std::size_t> negative_nodes(const Field& f);

/// Node-wise check 0 ≤ e ≤ C_ϑ (1 + ϑ^{1/α}); ϑ defaults to 0.
bool e_bound_holds(const CoefficientSet& cs, double c_theta, double alpha);

}  // namespace fhnvs
