#include "fhnvs/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

#include "fhnvs/error.hpp"
#include "fhnvs/random.hpp"

namespace fhnvs {

namespace {

void check_exponent_args(double alpha, int N) {
  if (N < 3) throw InvalidArgument("exponent set requires N >= 3");
  if (!(alpha > std::max(2.0, 0.5 * N))) throw InvalidArgument("exponent set requires alpha > max(2, N/2)");
}

std::vector<double> u_ladder() {
  std::vector<double> out;
  constexpr int per_side = 91;
  for (int k = 0; k < per_side; ++k) {
    const double mag = std::pow(10.0, -6.0 + 9.0 * k / (per_side - 1));
    out.push_back(mag);
    out.push_back(-mag);
  }
  return out;
}

void note(HypothesisCheck& c, double margin, double u, double v, std::size_t node) {
  ++c.samples;
  if (c.samples == 1 || margin > c.worst_margin) {
    c.worst_margin = margin;
    c.witness_u = u;
    c.witness_v = v;
    c.witness_node = node;
  }
  if (margin > 0.0) c.passed = false;
}

}  // namespace

NonlinearitySpec scalar_nonlinearity(const Grid& grid, std::string name, std::function<double(double)> f,
                                     std::function<double(double)> F, std::function<double(double)> fu,
                                     double p, double alpha, double mu0, double C0) {
  NonlinearitySpec s(grid);
  s.name = std::move(name);
  s.f = [f](std::size_t, double u) { return f(u); };
  s.F = [F](std::size_t, double u) { return F(u); };
  s.fu = [fu](std::size_t, double u) { return fu(u); };
  s.p = p;
  s.alpha = alpha;
  s.mu0 = mu0;
  s.C0 = C0;
  return s;
}

NonlinearitySpec power_nonlinearity(const Grid& grid, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("power nonlinearity requires p > 1");
  if (grid.dim() >= 3 && !(p < (grid.dim() + 2.0) / (grid.dim() - 2.0))) {
    throw InvalidArgument("supercritical exponent: p must be below 2* - 1");
  }
  const double alpha = grid.dim() >= 3 ? alpha_for_p(grid.dim(), p) : 3.0;
  return scalar_nonlinearity(
      grid, "power",
      [p](double u) { return std::pow(std::abs(u), p - 1.0) * u; },
      [p](double u) { return std::pow(std::abs(u), p + 1.0) / (p + 1.0); },
      [p](double u) { return p * std::pow(std::abs(u), p - 1.0); }, p, alpha, p + 1.0, p);
}

double exponent_set_right_endpoint(double alpha, int N) { return (N - 4.0 / alpha + 2.0) / (N - 2.0); }

// Endpoint tests with denominators cleared, so rational boundary points such
// as p = 11/3 for (N, α) = (3, 3) land on the correct side.
namespace {

bool below_right_endpoint(double alpha, int N, double p) { return alpha * (N - 2.0) * p < alpha * (N + 2.0) - 4.0; }

}  // namespace

bool exponent_set_contains(double alpha, int N, double p) {
  check_exponent_args(alpha, N);
  const bool first = p > 1.0 && p * N <= N + 2.0;
  const bool second = alpha * (N - 2.0) * p >= alpha * N - 4.0 && below_right_endpoint(alpha, N, p);
  return first || second;
}

bool exponent_set_single_interval(double alpha, int N, double p) {
  check_exponent_args(alpha, N);
  if (alpha > N) throw InvalidArgument("single-interval form requires alpha <= N");
  return p > 1.0 && below_right_endpoint(alpha, N, p);
}

double alpha_for_p(int N, double p) {
  if (N < 3) throw InvalidArgument("alpha_for_p requires N >= 3");
  const double critical = (N + 2.0) / (N - 2.0);
  if (!(p > 1.0)) throw InvalidArgument("alpha_for_p requires p > 1");
  if (!(p < critical)) throw InvalidArgument("alpha_for_p: p at or above the critical exponent 2* - 1");
  if (p < (N + 2.0 - 4.0 / N) / (N - 2.0)) return static_cast<double>(N);
  const double denom = -(N - 2.0) * p + N + 2.0 - 2.0 / N;
  // 4/denom >= 2N on this branch; the max absorbs rounding at the knee.
  if (denom > 0.0) return std::max(2.0 * N, 4.0 / denom);
  return 8.0 / (N + 2.0 - (N - 2.0) * p);
}

HypothesisReport validate_hypotheses(const NonlinearitySpec& spec, const Grid& grid, int samples,
                                     std::uint64_t seed) {
  if (samples < 1) throw InvalidArgument("validate_hypotheses requires samples >= 1");
  require_same_grid(grid, spec.phi.grid(), "validate_hypotheses");
  HypothesisReport rep;
  rep.h1.name = "h1";
  rep.h2.name = "h2";
  rep.h2_prime.name = "h2'";
  rep.h3.name = "h3";
  rep.h4.name = "h4";
  rep.h5.name = "h5";
  Rng rng(seed);
  const auto random_node = [&] { return static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(grid.size()) - 1)); };
  const auto random_u = [&] {
    const double mag = std::pow(10.0, rng.uniform(-6.0, 3.0));
    return rng.uniform() < 0.5 ? -mag : mag;
  };
  constexpr double slack = 1e-12;
  const std::vector<double> ladder = u_ladder();

  for (int s = 0; s < samples; ++s) {
    const std::size_t x = random_node();

    // h1: f(x, ·) evaluates to finite values.
    for (double u : ladder) note(rep.h1, std::isfinite(spec.f(x, u)) ? -1.0 : 1.0, u, 0.0, x);

    // h3: f(x, 0) = 0 exactly.
    note(rep.h3, std::abs(spec.f(x, 0.0)), 0.0, 0.0, x);

    // h4: 0 < μ₀F ≤ u f for u ≠ 0.
    for (double u : ladder) {
      const double lhs = spec.mu0 * spec.F(x, u);
      const double rhs = u * spec.f(x, u);
      const double scale = std::max(std::abs(lhs), std::abs(rhs));
      double margin = (lhs - rhs) / scale - slack;
      if (!(lhs > 0.0)) margin = std::max(margin, 1.0);
      if (!(spec.mu0 > 2.0)) margin = std::max(margin, 1.0);
      note(rep.h4, margin, u, 0.0, x);
    }

    // h5: f(x, ·) nondecreasing over the sorted ladder (including 0).
    std::vector<double> sorted = ladder;
    sorted.push_back(0.0);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
      const double lo = spec.f(x, sorted[k]);
      const double hi = spec.f(x, sorted[k + 1]);
      const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
      note(rep.h5, (lo - hi) / scale - slack, sorted[k], sorted[k + 1], x);
    }

    // h2 and h2': Lipschitz growth bounds on random pairs.
    const double weight = 1.0 + std::pow(spec.phi[x], 1.0 / spec.alpha);
    for (int t = 0; t < 8; ++t) {
      const double u = random_u();
      const double v = rng.uniform() < 0.25 ? -u : random_u();
      const double diff = std::abs(spec.f(x, u) - spec.f(x, v));
      const double growth = std::pow(std::abs(u), spec.p - 1.0) + std::pow(std::abs(v), spec.p - 1.0);
      const double bound2 = spec.C0 * weight * (1.0 + growth) * std::abs(u - v);
      const double bound2p = spec.C0 * (1.0 + growth) * std::abs(u - v);
      if (bound2 > 0.0) note(rep.h2, diff / bound2 - 1.0 - slack, u, v, x);
      if (bound2p > 0.0) note(rep.h2_prime, diff / bound2p - 1.0 - slack, u, v, x);
    }

    // ∂_u F against f by central differences.
    const double u = rng.uniform(-10.0, 10.0);
    const double delta = 1e-4 * std::max(1.0, std::abs(u));
    const double fd = (spec.F(x, u + delta) - spec.F(x, u - delta)) / (2.0 * delta);
    rep.antiderivative_error =
        std::max(rep.antiderivative_error, std::abs(fd - spec.f(x, u)) / std::max(1.0, std::abs(spec.f(x, u))));
  }

  if (grid.dim() >= 3) {
    const bool alpha_ok = spec.alpha > std::max(2.0, 0.5 * grid.dim());
    if (!alpha_ok || !exponent_set_contains(spec.alpha, grid.dim(), spec.p)) {
      rep.h2.passed = false;
      rep.h2.detail = "p is not in the exponent set for the given alpha";
    }
    if (!(spec.p > 1.0 && spec.p < (grid.dim() + 2.0) / (grid.dim() - 2.0))) {
      rep.h2_prime.passed = false;
      rep.h2_prime.detail = "p is not in (1, 2* - 1)";
    }
  } else {
    rep.h2.detail = "formal: exponent set defined for N >= 3 only";
  }
  if (!rep.h4.passed && rep.h4.detail.empty()) rep.h4.detail = "mu0 F(x,u) <= u f(x,u) violated or F <= 0";
  if (!rep.h5.passed) rep.h5.detail = "f(x, .) decreases between the witness values";
  if (!rep.h3.passed) rep.h3.detail = "f(x, 0) != 0";
  return rep;
}

namespace {

Field pointwise(const PointwiseFn& g, const Field& u) {
  Field out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = g(i, u[i]);
  return out;
}

}  // namespace

Field apply_f(const NonlinearitySpec& spec, const Field& u) { return pointwise(spec.f, u); }
Field apply_F(const NonlinearitySpec& spec, const Field& u) { return pointwise(spec.F, u); }
Field apply_fu(const NonlinearitySpec& spec, const Field& u) { return pointwise(spec.fu, u); }

}  // namespace fhnvs
