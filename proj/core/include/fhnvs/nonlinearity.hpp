#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fhnvs/grid.hpp"

namespace fhnvs {

/// Pointwise nonlinearity g(node, u); x enters through the node index.
using PointwiseFn = std::function<double(std::size_t node, double u)>;

/// f, its antiderivative F(x,u) = ∫₀ᵘ f(x,t) dt, its u-derivative, and the
/// constants of the growth and superlinearity hypotheses.
struct NonlinearitySpec {
  std::string name;
  PointwiseFn f;
  PointwiseFn F;
  PointwiseFn fu;
  double p = 3.0;
  double alpha = 3.0;
  double mu0 = 4.0;
  double C0 = 3.0;
  /// Weight φ ≥ 0 of the growth bound; the zero field for x-independent f.
  Field phi;

  explicit NonlinearitySpec(const Grid& grid) : phi(grid) {}
};

/// f = |u|^{p-1}u, F = |u|^{p+1}/(p+1), μ₀ = p+1, C₀ = p, φ ≡ 0. For dim 3,
/// p must lie in (1, 5); lower dimensions accept any p > 1.
NonlinearitySpec power_nonlinearity(const Grid& grid, double p);

/// x-independent nonlinearity from scalar callables.
NonlinearitySpec scalar_nonlinearity(const Grid& grid, std::string name, std::function<double(double)> f,
                                     std::function<double(double)> F, std::function<double(double)> fu,
                                     double p, double alpha, double mu0, double C0);

/// p ∈ (1, 1+2/N] ∪ [(N−4/α)/(N−2), (N−4/α+2)/(N−2)).
bool exponent_set_contains(double alpha, int N, double p);
/// p ∈ (1, (N−4/α+2)/(N−2)); the form the union takes when α ≤ N.
bool exponent_set_single_interval(double alpha, int N, double p);
/// Right endpoint (N−4/α+2)/(N−2) of the exponent set.
double exponent_set_right_endpoint(double alpha, int N);

/// An α with p ∈ P_{α,N}: N for p below (N+2−4/N)/(N−2), then
/// 4/(N+2−2/N−(N−2)p) while that denominator is positive, and
/// 8/(N+2−(N−2)p) up to the critical exponent (N+2)/(N−2), which is rejected.
double alpha_for_p(int N, double p);

struct HypothesisCheck {
  std::string name;
  bool passed = true;
  int samples = 0;
  /// Worst sample: u (and v for two-point checks) and the node.
  double witness_u = 0.0;
  double witness_v = 0.0;
  std::size_t witness_node = 0;
  /// Worst violation margin; ≤ 0 when passed.
  double worst_margin = 0.0;
  std::string detail;
};

struct HypothesisReport {
  HypothesisCheck h1;
  HypothesisCheck h2;
  HypothesisCheck h2_prime;
  HypothesisCheck h3;
  HypothesisCheck h4;
  HypothesisCheck h5;
  /// Max relative error of the central difference of F against f.
  double antiderivative_error = 0.0;
  bool all_passed() const noexcept { return h1.passed && h2.passed && h3.passed && h4.passed && h5.passed; }
};

/// Sampling-based checks of the hypotheses over log-spaced |u| ∈ [1e-6, 1e3]
/// of both signs and random nodes. Failures are report content.
HypothesisReport validate_hypotheses(const NonlinearitySpec& spec, const Grid& grid, int samples,
                                     std::uint64_t seed);

/// Nodal evaluations.
Field apply_f(const NonlinearitySpec& spec, const Field& u);
Field apply_F(const NonlinearitySpec& spec, const Field& u);
Field apply_fu(const NonlinearitySpec& spec, const Field& u);

}  // namespace fhnvs
