#include "fhnvs/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fhnvs/error.hpp"
#include "fhnvs/random.hpp"
#include "fhnvs/spectral.hpp"

namespace fhnvs {

ReducedOperator::ReducedOperator(CoefficientSet coeffs, ReducedOptions options)
    : coeffs_(std::move(coeffs)), options_(options), e_(coeffs_.e()), d_(coeffs_.d()) {
  if (!(options_.inner_tol > 0.0) || options_.inner_max_iter < 1) {
    throw InvalidArgument("inner CG tolerance and iteration limit must be positive");
  }
  lambda1_b_ = lambda1(coeffs_.b());
  if (!(lambda1_b_ > kCertificationTol)) {
    throw CertificationError("lambda1(b) = " + std::to_string(lambda1_b_) +
                             " is not positive; -Δ_h + b is not SPD");
  }
  star_ = e_.min() >= 0.0;
  if (star_ && coeffs_.a_positive()) {
    lambda1_d_ = lambda1(d_);
    factorization_ = lambda1_d_ > kCertificationTol;
  } else {
    lambda1_d_ = std::numeric_limits<double>::quiet_NaN();
  }
}

ReducedOperator::ReducedOperator(const ReducedOperator& base, ReducedOptions options) : ReducedOperator(base) {
  options_ = options;
}

ReducedOperator ReducedOperator::with_inner_tol(double tol) const {
  if (!(tol > 0.0)) throw InvalidArgument("inner tolerance must be positive");
  ReducedOptions opts = options_;
  opts.inner_tol = tol;
  return ReducedOperator(*this, opts);
}

void ReducedOperator::require_star(const char* what) const {
  if (!star_) throw CertificationError(std::string(what) + " requires e = b - 2 sqrt(beta) a >= 0");
}

void ReducedOperator::require_factorization(const char* what) const {
  if (!factorization_) {
    throw CertificationError(std::string(what) + " requires a > 0, e >= 0 and lambda1(d) > 0");
  }
}

Field ReducedOperator::solve(const Field& shift, const Field& rhs, const char* stage) const {
  require_same_grid(grid(), rhs.grid(), stage);
  if (rhs.max_abs() == 0.0) return Field(grid());
  CgOptions opts;
  opts.tol = options_.inner_tol;
  opts.max_iter = options_.inner_max_iter;
  opts.stage = stage;
  return cg_solve(shifted_laplacian(shift), rhs, opts).x;
}

Field ReducedOperator::solve_b(const Field& w) const { return solve(coeffs_.b(), w, "S_b solve"); }

Field ReducedOperator::solve_d(const Field& w) const {
  require_factorization("solve_d");
  return solve(d_, w, "d solve");
}

Field ReducedOperator::apply_Sb(const Field& u) const {
  Field load = hadamard(coeffs_.a(), u);
  load *= coeffs_.beta();
  return solve_b(load);
}

Field ReducedOperator::apply_forward(const Field& u) const {
  Field out = laplacian_apply(u);
  out += hadamard(coeffs_.a(), apply_Sb(u));
  return out;
}

Field ReducedOperator::apply_forward_star(const Field& u) const {
  require_star("apply_forward_star");
  Field out = apply_forward(u);
  out += hadamard(e_, u);
  return out;
}

Field ReducedOperator::factorized_inverse(const Field& w) const {
  require_factorization("factorized_inverse");
  Field z = solve(d_, w, "factorized inverse, first d solve");
  Field u = z;
  u.axpy(std::sqrt(coeffs_.beta()), solve(d_, hadamard(coeffs_.a(), z), "factorized inverse, second d solve"));
  return u;
}

double ReducedOperator::inner_b(const Field& u, const Field& w) const {
  return inner_l2(laplacian_apply(u), w) + inner_l2(hadamard(coeffs_.b(), u), w);
}

double ReducedOperator::inner_ab(const Field& u, const Field& w) const {
  return inner_l2(laplacian_apply(u), w) + inner_l2(hadamard(coeffs_.a(), u), apply_Sb(w));
}

double ReducedOperator::inner_ab_star(const Field& u, const Field& w) const {
  require_star("inner_ab_star");
  return inner_ab(u, w) + inner_l2(hadamard(e_, u), w);
}

NormIdentity norm_ab_identity_check(const ReducedOperator& op, const Field& u) {
  NormIdentity out;
  out.lhs = op.inner_ab(u, u);
  const Field v = op.apply_Sb(u);
  const double h1 = norms(u).h1_semi;
  out.rhs = h1 * h1 + op.inner_b(v, v) / op.coeffs().beta();
  out.rel_err = std::abs(out.lhs - out.rhs) / std::max(out.lhs, std::numeric_limits<double>::min());
  if (out.lhs == 0.0 && out.rhs == 0.0) out.rel_err = 0.0;
  return out;
}

MaxPrincipleReport maxprinciple_check(const ReducedOperator& op, int trials, std::uint64_t seed) {
  MaxPrincipleReport rep;
  rep.worst_min_factorized = std::numeric_limits<double>::infinity();
  rep.worst_min_b = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  const auto record = [](const Field& u, int& violations, int& not_strict, double& worst) {
    const double tol = 1e-10 * u.max_abs();
    const double m = u.min();
    worst = std::min(worst, u.max_abs() > 0.0 ? m / u.max_abs() : 0.0);
    if (m < -tol) ++violations;
    if (!(m > tol)) ++not_strict;
  };
  for (int t = 0; t < trials; ++t) {
    Field w = random_smooth_field(op.grid(), rng, 6, true);
    if (w.max_abs() == 0.0) w = Field(op.grid(), 1.0);
    ++rep.trials;
    record(op.solve_b(w), rep.violations_b, rep.not_strict_b, rep.worst_min_b);
    if (op.factorization_available()) {
      record(op.factorized_inverse(w), rep.violations_factorized, rep.not_strict_factorized,
             rep.worst_min_factorized);
    }
  }
  return rep;
}

}  // namespace fhnvs
