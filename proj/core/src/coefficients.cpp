#include "fhnvs/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fhnvs/error.hpp"
#include "fhnvs/field_io.hpp"
#include "fhnvs/spectral.hpp"

namespace fhnvs {

CoefficientSet::CoefficientSet(Field a, Field b, double beta, std::optional<Field> phi,
                               std::optional<Field> theta)
    : a_(std::move(a)), b_(std::move(b)), beta_(beta), phi_(a_.grid()), theta_(std::move(theta)) {
  require_same_grid(a_.grid(), b_.grid(), "CoefficientSet");
  if (!std::isfinite(beta_) || beta_ <= 0.0) throw InvalidArgument("beta must be finite and positive");
  if (!a_.all_finite() || !b_.all_finite()) throw InvalidArgument("coefficients must be finite");
  if (phi) {
    require_same_grid(a_.grid(), phi->grid(), "CoefficientSet phi");
    if (!phi->all_finite() || phi->min() < 0.0) throw InvalidArgument("phi must be finite and nonnegative");
    phi_ = std::move(*phi);
  }
  if (theta_) {
    require_same_grid(a_.grid(), theta_->grid(), "CoefficientSet theta");
    if (!theta_->all_finite() || theta_->min() < 0.0) {
      throw InvalidArgument("theta must be finite and nonnegative");
    }
  }
}

Field CoefficientSet::c() const { return beta_ * a_; }

Field CoefficientSet::e() const {
  Field e = b_;
  e.axpy(-2.0 * std::sqrt(beta_), a_);
  return e;
}

Field CoefficientSet::d() const {
  Field d = b_;
  d.axpy(-std::sqrt(beta_), a_);
  return d;
}

bool CoefficientSet::a_positive() const noexcept { return a_.min() > 0.0; }

bool CoefficientSet::e_nonnegative() const { return e().min() >= 0.0; }

CoefficientSet constant_coeffs(const Grid& grid, double a0, double b0, double beta) {
  if (!std::isfinite(a0) || !std::isfinite(b0)) throw InvalidArgument("coefficients must be finite");
  return CoefficientSet(Field(grid, a0), Field(grid, b0), beta);
}

Field example_sigma(const Grid& grid, double r, double kappa, double mu_r) {
  if (!(r > 1.0)) throw InvalidArgument("example_sigma requires r > 1");
  if (!(kappa > 0.0)) throw InvalidArgument("example_sigma requires kappa > 0");
  if (!(mu_r > 0.0)) throw InvalidArgument("example_sigma requires mu_r > 0");
  if (!(r < grid.half_width())) throw InvalidArgument("example_sigma: ball B_r does not fit in the grid");
  const double floor = -mu_r / (2.0 * r);
  return Field::sample(grid, [&](const Point& z) {
    double y2 = 0.0;
    for (int k = 1; k < grid.dim(); ++k) y2 += z[k] * z[k];
    const double rad = std::sqrt(z[0] * z[0] + y2);
    const double outer = 1.0 + kappa * kappa * (1.0 + std::abs(z[0])) * (1.0 + std::abs(z[0])) * y2;
    if (rad <= 0.5 * r) return floor;
    if (rad >= r) return outer;
    const double t = (rad - 0.5 * r) / (0.5 * r);
    return std::max(floor, (1.0 - t) * floor + t * outer);
  });
}

double poincare_mu(const Grid& grid, double r) {
  if (!(r > 0.0)) throw InvalidArgument("poincare_mu requires r > 0");
  if (!(2.0 * r <= grid.half_width())) throw InvalidArgument("poincare_mu: ball B_2r does not fit in the grid");
  const DomainMask ball = DomainMask::ball(grid, Point{0.0, 0.0, 0.0}, 2.0 * r);
  return lambda1(Field(grid, 0.0), ball);
}

Field gaussian_sigma(const Grid& grid) {
  const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * grid.dim());
  return Field::sample(grid, [&](const Point& x) {
    return norm * std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  });
}

PairedCoefficients paired_class_coeffs(const Grid& grid, double r1, double kappa1, double r2, double kappa2) {
  PairedCoefficients out{Field(grid), Field(grid), poincare_mu(grid, r1), poincare_mu(grid, r2)};
  out.a = example_sigma(grid, r1, kappa1, out.mu_r1);
  out.b = example_sigma(grid, r2, kappa2, out.mu_r2);
  return out;
}

Field load_field(const Grid& grid, const std::filesystem::path& path) { return load_csv(grid, path); }

Field derive_e(const CoefficientSet& cs) { return cs.e(); }

Field derive_d(const CoefficientSet& cs) { return cs.d(); }

std::vector<std::size_t> negative_nodes(const Field& f) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] < 0.0) out.push_back(i);
  }
  return out;
}

bool e_bound_holds(const CoefficientSet& cs, double c_theta, double alpha) {
  const Field e = cs.e();
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double theta = cs.theta() ? (*cs.theta())[i] : 0.0;
    if (e[i] < 0.0 || e[i] > c_theta * (1.0 + std::pow(theta, 1.0 / alpha))) return false;
  }
  return true;
}

}  // namespace fhnvs
