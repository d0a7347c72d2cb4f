#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fhnvs/discretization.hpp"
#include "fhnvs/grid.hpp"

namespace fhnvs {

/// Positivity threshold for certifying λ₁ > 0.
inline constexpr double kCertificationTol = 1e-6;

/// Subset of grid nodes carrying unknowns; inactive nodes are held at zero
/// (Dirichlet condition on the masked region).
class DomainMask {
 public:
  DomainMask(const Grid& grid, std::vector<char> active);

  static DomainMask full(const Grid& grid);
  /// Nodes with |x - center| < radius.
  static DomainMask ball(const Grid& grid, const Point& center, double radius);
  /// Nodes with |x| > radius (box minus the closed ball).
  static DomainMask exterior(const Grid& grid, double radius);

  const Grid& grid() const noexcept { return grid_; }
  bool active(std::size_t i) const noexcept { return active_[i] != 0; }
  std::size_t count() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }
  /// Zeroes inactive nodes in place.
  void restrict(Field& f) const noexcept;
  /// True if every active node of this mask is active in `other`.
  bool subset_of(const DomainMask& other) const noexcept;

 private:
  Grid grid_;
  std::vector<char> active_;
  std::size_t count_ = 0;
};

/// y = -Δ_h x + σ x on the active nodes, 0 elsewhere.
LinearOperator masked_schrodinger(const Field& sigma, const DomainMask& mask);

struct EigenOptions {
  /// Stop when ‖A x − ρ x‖ ≤ tol · max(1, |ρ|) for unit x.
  double tol = 1e-9;
  int max_iter = 5000;
  double cg_tol = 1e-10;
};

struct EigenPair {
  double value = 0.0;
  Field vector;
  int iterations = 0;
  double residual = 0.0;
};

/// Lowest eigenpair of -Δ_h + diag(σ) restricted to the mask, by
/// shift-and-invert power iteration with a shift below the spectrum. The
/// returned vector has unit Euclidean norm and nonnegative sum; the value is
/// its Rayleigh quotient.
EigenPair lowest_eigenpair(const Field& sigma, const DomainMask& mask, const EigenOptions& options = {});

double lambda1(const Field& sigma, const DomainMask& mask, const EigenOptions& options = {});
double lambda1(const Field& sigma, const EigenOptions& options = {});

struct NuOptions {
  int restarts = 6;
  std::uint64_t seed = 20240901;
  int max_iter = 3000;
  /// Stop when the preconditioned gradient norm falls below tol.
  double tol = 1e-8;
  /// Replaces the default first start (the ground state of -Δ_h + σ).
  std::optional<Field> initial;
};

struct NuResult {
  double value = std::numeric_limits<double>::infinity();
  Field minimizer;
  std::vector<double> restart_values;
  /// s outside [2, 2*) theory range (dimension < 3).
  bool formal = false;
  bool stagnated = false;

  explicit NuResult(const Grid& grid) : minimizer(grid) {}
};

/// (∫|∇u|² + σu²) / ‖u‖²_{L_s(Ω)} for u supported on the mask.
double nu_quotient(const Field& sigma, const DomainMask& mask, const Field& u, double s);

/// ν_s(σ, Ω): infimum of nu_quotient over u ≠ 0 supported on the mask.
/// s = 2 is the eigenvalue problem and is answered by lowest_eigenpair; s > 2
/// uses preconditioned gradient descent on the L_s sphere with several
/// deterministic restarts (best-of-restarts). An empty mask yields +∞.
NuResult nu_s(const Field& sigma, const DomainMask& mask, double s, const NuOptions& options = {});

struct NuSample {
  std::string label;
  Point center{0.0, 0.0, 0.0};
  double radius = 0.0;
  double value = 0.0;
};

struct ClassReport {
  double lambda1 = 0.0;
  bool lambda1_positive = false;
  double s = 2.0;
  bool formal = false;
  /// ν_s on balls B_R(center) along the requested centers.
  std::vector<NuSample> nu_values;
  bool nu_trend_increasing = false;
  /// ν_s on box \ B̄_ρ(0) along the radius ladder.
  std::vector<NuSample> exterior_values;
  bool exterior_trend_increasing = false;
};

/// Finite-box diagnostic of the shifted-ball condition: ν_s on each ball
/// B_R(center) and on the exterior ladder. Trends are "consistent with"
/// verdicts, not proofs.
ClassReport shifted_ball_diagnostic(const Field& sigma, double radius, const std::vector<Point>& centers,
                                    const std::vector<double>& ladder, double s,
                                    const NuOptions& options = {});

/// True if the sequence is non-decreasing up to a relative slack.
bool non_decreasing(const std::vector<double>& values, double rel_slack = 1e-9);

struct RatioEnvelope {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  int trials = 0;
};

/// ‖u‖_{σ+} = (∫|∇u|² + ∫σ⁺u²)^{1/2}
double sigma_plus_norm(const Field& u, const Field& sigma);

/// Extremes of ‖u‖_{a+} / ‖u‖_{b+} over random smooth fields.
RatioEnvelope norm_equivalence_diagnostic(const Field& a, const Field& b, int trials, std::uint64_t seed);

}  // namespace fhnvs
