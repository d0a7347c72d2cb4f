#include <gtest/gtest.h>

#include <cmath>

#include "fhnvs/coefficients.hpp"
#include "fhnvs/discretization.hpp"
#include "fhnvs/energy.hpp"
#include "fhnvs/error.hpp"
#include "fhnvs/random.hpp"

using namespace fhnvs;

namespace {

EnergyProblem reference_problem(const Grid& g, Metric metric = Metric::ab) {
  return EnergyProblem(ReducedOperator(constant_coeffs(g, 1.0, 3.0, 1.0)), power_nonlinearity(g, 3.0), metric);
}

}  // namespace

TEST(Energy, ZeroField) {
  const Grid g(2, 2.0, 9);
  for (Metric m : {Metric::ab, Metric::ab_star}) {
    const EnergyProblem prob = reference_problem(g, m);
    EXPECT_DOUBLE_EQ(prob.energy(Field(g)), 0.0);
    EXPECT_DOUBLE_EQ(prob.gradient(Field(g)).max_abs(), 0.0);
    EXPECT_DOUBLE_EQ(prob.psi(Field(g)), 0.0);
  }
}

TEST(Energy, MetricConsistency) {
  const Grid g(3, 2.0, 7);
  const EnergyProblem ab = reference_problem(g, Metric::ab);
  const EnergyProblem star = ab.with_metric(Metric::ab_star);
  Rng rng(10);
  for (int t = 0; t < 50; ++t) {
    const Field u = 2.0 * random_smooth_field(g, rng);
    const double j1 = ab.energy(u);
    const double j2 = star.energy(u);
    EXPECT_LE(std::abs(j1 - j2), 1e-9 * std::max(std::abs(j1), 1e-12));
    EXPECT_GE(ab.psi(u), 0.0);
  }
}

TEST(Energy, StarMetricNeedsFactorization) {
  const Grid g(1, 1.0, 9);
  EXPECT_THROW(EnergyProblem(ReducedOperator(constant_coeffs(g, 1.0, 1.0, 1.0)), power_nonlinearity(g, 3.0),
                             Metric::ab_star),
               CertificationError);
  EXPECT_THROW(reference_problem(g, Metric::ab).map_A(Field(g)), InvalidArgument);
}

TEST(Energy, MetricNames) {
  EXPECT_EQ(to_string(Metric::ab), "ab");
  EXPECT_EQ(to_string(Metric::ab_star), "ab_star");
  EXPECT_EQ(metric_from_string("ab_star"), Metric::ab_star);
  EXPECT_THROW(metric_from_string("l2"), InvalidArgument);
}

TEST(Energy, MountainPassGeometry) {
  const Grid g(2, 2.0, 11);
  const EnergyProblem prob = reference_problem(g);
  Rng rng(12);
  for (int t = 0; t < 5; ++t) {
    const Field u0 = random_smooth_field(g, rng);
    EXPECT_GT(prob.energy(1e-2 * u0), 0.0);
    double prev = 0.0;
    bool went_negative = false;
    for (double lam = 1.0; lam <= 1e4; lam *= 4.0) {
      const double j = prob.energy(lam * u0);
      if (went_negative) EXPECT_LT(j, prev);
      went_negative = went_negative || j < 0.0;
      prev = j;
    }
    EXPECT_TRUE(went_negative);
  }
}

TEST(Gradient, CentralDifferenceSecondOrder) {
  const Grid g(2, 2.0, 9);
  for (Metric m : {Metric::ab, Metric::ab_star}) {
    const EnergyProblem prob = reference_problem(g, m).with_tolerances(1e-13, 1e-12);
    Rng rng(m == Metric::ab ? 31 : 32);
    for (int t = 0; t < 6; ++t) {
      const Field u = 2.0 * random_smooth_field(g, rng);
      const Field h = random_smooth_field(g, rng);
      const double exact = prob.inner(prob.gradient(u), h);
      auto err = [&](double delta) {
        const double fd = (prob.energy(u + delta * h) - prob.energy(u - delta * h)) / (2.0 * delta);
        return std::abs(fd - exact);
      };
      const double e2 = err(1e-2);
      const double e3 = err(1e-3);
      const double e4 = err(1e-4);
      EXPECT_LE(e3, 1e-6 * 1e4 * e2 + 1e-7);
      EXPECT_LE(e4, 1e-7 + 1e-2 * e2);
      if (e2 > 1e-8) {
        const double order = std::log10(e2 / e3);
        EXPECT_GT(order, 1.8);
        EXPECT_LT(order, 2.2);
      }
    }
  }
}

TEST(Gradient, RieszRepresentsLoad) {
  const Grid g(2, 2.0, 9);
  const EnergyProblem prob = reference_problem(g).with_tolerances(1e-13, 1e-12);
  Rng rng(13);
  const Field w = random_smooth_field(g, rng);
  const Field r = prob.riesz(w);
  for (int t = 0; t < 5; ++t) {
    const Field h = random_smooth_field(g, rng);
    const double lhs = prob.inner(r, h);
    const double rhs = inner_l2(w, h);
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(std::abs(rhs), 1e-3));
  }
}

TEST(Energy, ArInequality) {
  const Grid g(2, 2.0, 9);
  for (Metric m : {Metric::ab, Metric::ab_star}) {
    const EnergyProblem prob = reference_problem(g, m);
    const double mu0 = prob.spec().mu0;
    Rng rng(14);
    for (int t = 0; t < 20; ++t) {
      const Field u = rng.uniform(0.1, 5.0) * random_smooth_field(g, rng);
      const double lhs = mu0 * prob.energy(u) - prob.inner(prob.gradient(u), u);
      const double rhs = (0.5 * mu0 - 1.0) * prob.op().inner_ab(u, u);
      EXPECT_GE(lhs, rhs - 1e-8 * std::abs(rhs));
    }
  }
}

TEST(Energy, AbAndStarFormsAgreeDirectly) {
  const Grid g(1, 2.0, 31);
  const EnergyProblem prob = reference_problem(g, Metric::ab_star);
  Rng rng(15);
  const Field u = random_smooth_field(g, rng);
  EXPECT_NEAR(prob.energy_ab_form(u), prob.energy_star_form(u), 1e-10 * std::abs(prob.energy_ab_form(u)));
  const Field e = prob.op().e();
  EXPECT_NEAR(prob.psi_tilde(u) - prob.psi(u), 0.5 * inner_l2(hadamard(e, u), u), 1e-14);
}

TEST(Weth, ReferenceProblemPasses) {
  const Grid g(2, 2.0, 9);
  const EnergyProblem prob = reference_problem(g, Metric::ab_star);
  const WethReport r = weth_checks(prob, 10, 7);
  EXPECT_TRUE(r.a21_passed);
  EXPECT_GE(r.a21_worst_margin, -1e-12);
  EXPECT_GE(r.c_star_norm, 1.0);
  EXPECT_GT(r.q_lower, 0.0);
  EXPECT_LT(r.q_lower, 1.0);
  EXPECT_NEAR(r.q_lower, std::sqrt(1.0 - 1.0 / r.c_star_norm), 1e-12);
  EXPECT_LE(r.small_scale_ratio, r.q_lower);
  EXPECT_TRUE(r.a22_passed);
  EXPECT_TRUE(r.a3_passed);
  EXPECT_TRUE(r.a4_passed);
  EXPECT_TRUE(r.all_passed());
}

TEST(Weth, StarFactorIsOnePlusInverseLambda) {
  // e ≡ 1: sup ‖u‖*²/‖u‖²_ab is 1 + 1/(μ₁ + 1/(μ₁+3)) at the ground mode.
  const Grid g(1, 2.0, 31);
  const WethReport r = weth_checks(reference_problem(g, Metric::ab_star), 4, 1);
  const double mu = box_laplacian_min_eigenvalue(g);
  EXPECT_NEAR(r.c_star_norm, 1.0 + 1.0 / (mu + 1.0 / (mu + 3.0)), 1e-6);
}
