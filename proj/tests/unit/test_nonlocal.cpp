#include <gtest/gtest.h>

#include <cmath>

#include "fhnvs/coefficients.hpp"
#include "fhnvs/discretization.hpp"
#include "fhnvs/error.hpp"
#include "fhnvs/nonlocal.hpp"
#include "fhnvs/random.hpp"
#include "oracles.hpp"

using namespace fhnvs;
using namespace fhnvs::testing;

namespace {

ReducedOperator reference_operator(const Grid& g) { return ReducedOperator(constant_coeffs(g, 1.0, 3.0, 1.0)); }

struct Modes {
  Eigen::VectorXd mu;
  Eigen::MatrixXd phi;
};

Modes laplacian_modes(const Grid& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_laplacian(g));
  return {es.eigenvalues(), es.eigenvectors()};
}

Field unit_l2_mode(const Grid& g, const Modes& m, Eigen::Index k) {
  Field f = from_eigen(g, m.phi.col(k));
  f *= 1.0 / std::sqrt(inner_l2(f, f));
  return f;
}

}  // namespace

TEST(ReducedOperator, RefusesUncertifiedB) {
  const Grid g(2, 1.0, 7);
  EXPECT_THROW(ReducedOperator(constant_coeffs(g, 1.0, -100.0, 1.0)), CertificationError);
}

TEST(ReducedOperator, CertificateFlags) {
  const Grid g(1, 1.0, 9);
  const ReducedOperator ok = reference_operator(g);
  EXPECT_TRUE(ok.star_available());
  EXPECT_TRUE(ok.factorization_available());
  const ReducedOperator neg(constant_coeffs(g, 1.0, 1.0, 1.0));
  EXPECT_FALSE(neg.star_available());
  EXPECT_FALSE(neg.factorization_available());
  EXPECT_THROW(neg.inner_ab_star(Field(g, 1.0), Field(g, 1.0)), CertificationError);
  EXPECT_THROW(neg.factorized_inverse(Field(g, 1.0)), CertificationError);
}

TEST(ApplySb, ZeroAndEigenvectorOracle) {
  const Grid g(2, 1.0, 7);
  const ReducedOperator op = reference_operator(g);
  EXPECT_DOUBLE_EQ(op.apply_Sb(Field(g)).max_abs(), 0.0);
  const Modes m = laplacian_modes(g);
  for (Eigen::Index k : {0, 3, 10, 48}) {
    const Field phi = unit_l2_mode(g, m, k);
    const Field v = op.apply_Sb(phi);
    const Field expect = (1.0 / (m.mu(k) + 3.0)) * phi;
    EXPECT_LT((v - expect).max_abs(), 1e-8 * phi.max_abs());
  }
}

TEST(ApplySb, MatchesDenseSolve) {
  const Grid g(3, 1.0, 5);
  Rng rng(21);
  const Field a = random_nodal_field(g, rng, -1.0, 2.0);
  const Field b = random_nodal_field(g, rng, 0.5, 3.0);
  const ReducedOperator op(CoefficientSet(a, b, 1.7));
  const Field u = random_nodal_field(g, rng);
  Eigen::MatrixXd B = dense_laplacian(g);
  B.diagonal() += to_eigen(b);
  const Eigen::VectorXd oracle = 1.7 * B.ldlt().solve(to_eigen(a).cwiseProduct(to_eigen(u)));
  EXPECT_LT((to_eigen(op.apply_Sb(u)) - oracle).cwiseAbs().maxCoeff(), 1e-9 * oracle.cwiseAbs().maxCoeff());
}

TEST(InnerProducts, SymmetryAndPositivity) {
  const Grid g(3, 2.0, 7);
  Rng rng(5);
  const Field a = example_sigma(g, 1.2, 0.5, poincare_mu(Grid(3, 2.4, 7), 1.2));
  const ReducedOperator op(CoefficientSet(a, Field(g, 2.0), 1.0));
  for (int t = 0; t < 20; ++t) {
    const Field u = random_smooth_field(g, rng);
    const Field w = random_smooth_field(g, rng);
    const double uw = inner_l2(hadamard(a, u), op.apply_Sb(w));
    const double wu = inner_l2(hadamard(a, w), op.apply_Sb(u));
    EXPECT_LE(std::abs(uw - wu), 1e-10 * std::max({std::abs(uw), std::abs(wu), 1e-300}) + 1e-14);
    const double ab1 = op.inner_ab(u, w);
    const double ab2 = op.inner_ab(w, u);
    EXPECT_LE(std::abs(ab1 - ab2), 1e-10 * std::max(std::abs(ab1), 1e-12));
    EXPECT_GT(op.inner_ab(u, u), 0.0);
  }
  EXPECT_DOUBLE_EQ(op.inner_ab(Field(g), Field(g)), 0.0);
}

TEST(InnerProducts, EigenOracle) {
  const Grid g(2, 1.0, 7);
  const ReducedOperator op = reference_operator(g);
  const Modes m = laplacian_modes(g);
  for (Eigen::Index k : {0, 5, 20}) {
    const Field phi = unit_l2_mode(g, m, k);
    const double mu = m.mu(k);
    EXPECT_NEAR(op.inner_ab(phi, phi), mu + 1.0 / (mu + 3.0), 1e-8 * mu);
    EXPECT_NEAR(op.inner_b(phi, phi), mu + 3.0, 1e-10 * mu);
    EXPECT_NEAR(op.inner_ab_star(phi, phi), mu + 1.0 + 1.0 / (mu + 3.0), 1e-8 * mu);
  }
}

TEST(InnerProducts, StarDominatesAb) {
  const Grid g(2, 2.0, 11);
  const ReducedOperator op = reference_operator(g);
  Rng rng(8);
  double cstar = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Field u = random_smooth_field(g, rng);
    const double ab = op.inner_ab(u, u);
    const double star = op.inner_ab_star(u, u);
    EXPECT_GE(star, ab);
    cstar = std::max(cstar, star / ab);
  }
  // ‖u‖*² ≤ (1 + 1/λ₁(-Δ_h)) ‖u‖²_ab for e ≡ 1.
  EXPECT_LE(cstar, 1.0 + 1.0 / box_laplacian_min_eigenvalue(g));
}

TEST(NormIdentity, ConstantCoefficients) {
  const Grid g(3, 2.0, 9);
  const ReducedOperator op = reference_operator(g);
  const NormIdentity zero = norm_ab_identity_check(op, Field(g));
  EXPECT_DOUBLE_EQ(zero.lhs, 0.0);
  EXPECT_DOUBLE_EQ(zero.rhs, 0.0);
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const NormIdentity id = norm_ab_identity_check(op, random_smooth_field(g, rng));
    EXPECT_LE(id.rel_err, 1e-8);
  }
}

TEST(NormIdentity, SignChangingCoefficients) {
  const Grid g(3, 4.0, 11);
  const PairedCoefficients p = paired_class_coeffs(g, 1.5, 0.5, 1.5, 1.0);
  const ReducedOperator op(CoefficientSet(p.a, p.b, 1.0));
  ASSERT_GT(op.lambda1_b(), 1e-6);
  Rng rng(2);
  for (int t = 0; t < 10; ++t) EXPECT_LE(norm_ab_identity_check(op, random_smooth_field(g, rng)).rel_err, 1e-6);
}

TEST(Riesz, WitnessAttainsSupremum) {
  const Grid g(2, 2.0, 11);
  Rng rng(3);
  const Field a = random_nodal_field(g, rng, 0.2, 1.5);
  const double beta = 2.0;
  const ReducedOperator op(CoefficientSet(a, Field(g, 1.0), beta));
  const Field u = random_smooth_field(g, rng);
  const Field v = op.apply_Sb(u);
  const double norm_v = std::sqrt(op.inner_b(v, v));
  const Field au = hadamard(a, u);
  const Field witness = (1.0 / norm_v) * v;
  EXPECT_NEAR(beta * inner_l2(au, witness), norm_v, 1e-8 * norm_v);
  for (int t = 0; t < 200; ++t) {
    Field w = random_smooth_field(g, rng);
    w *= 1.0 / std::sqrt(op.inner_b(w, w));
    EXPECT_LE(beta * std::abs(inner_l2(au, w)), norm_v * (1.0 + 1e-10));
  }
}

TEST(NormEquivalence, EnvelopeStableUnderRefinement) {
  auto envelope = [](int n) {
    const Grid g(2, 2.0, n);
    const ReducedOperator op = reference_operator(g);
    Rng rng(44);
    double lo = 1e300;
    double hi = 0.0;
    for (int t = 0; t < 100; ++t) {
      const Field u = random_smooth_field(g, rng);
      const double r = std::sqrt(op.inner_ab(u, u) / op.inner_b(u, u));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    return std::pair{lo, hi};
  };
  const auto coarse = envelope(15);
  const auto fine = envelope(31);
  EXPECT_GT(coarse.first, 0.0);
  EXPECT_LT(std::abs(fine.first - coarse.first) / coarse.first, 0.2);
  EXPECT_LT(std::abs(fine.second - coarse.second) / coarse.second, 0.2);
}

TEST(FactorizedInverse, EigenOracleAndZero) {
  const Grid g(2, 1.0, 7);
  const ReducedOperator op = reference_operator(g);
  EXPECT_DOUBLE_EQ(op.factorized_inverse(Field(g)).max_abs(), 0.0);
  const Modes m = laplacian_modes(g);
  for (Eigen::Index k : {0, 7, 30}) {
    const Field phi = unit_l2_mode(g, m, k);
    const double mu = m.mu(k);
    const Field expect = ((mu + 3.0) / ((mu + 2.0) * (mu + 2.0))) * phi;
    EXPECT_LT((op.factorized_inverse(phi) - expect).max_abs(), 1e-8 * expect.max_abs());
  }
}

TEST(FactorizedInverse, InvertsForwardOperator) {
  const Grid g(3, 2.0, 9);
  Rng rng(6);
  const Field a = random_nodal_field(g, rng, 0.5, 1.0);
  const Field b = random_nodal_field(g, rng, 2.0, 4.0);
  const ReducedOperator op(CoefficientSet(a, b, 1.0));
  ASSERT_TRUE(op.factorization_available());
  for (int t = 0; t < 10; ++t) {
    const Field w = random_smooth_field(g, rng);
    const Field back = op.apply_forward_star(op.factorized_inverse(w));
    EXPECT_LE(std::sqrt(dot(back - w, back - w)), 1e-7 * std::sqrt(dot(w, w)));
    const Field u = random_smooth_field(g, rng);
    const Field again = op.factorized_inverse(op.apply_forward_star(u));
    EXPECT_LE(std::sqrt(dot(again - u, again - u)), 1e-7 * std::sqrt(dot(u, u)));
  }
}

TEST(FactorizedInverse, MatchesDenseForward) {
  const Grid g(2, 1.0, 6);
  Rng rng(7);
  const Field a = random_nodal_field(g, rng, 0.5, 1.0);
  const Field b = random_nodal_field(g, rng, 2.0, 4.0);
  const ReducedOperator op(CoefficientSet(a, b, 1.0));
  const Eigen::MatrixXd M = dense_forward_star(g, a, b, 1.0);
  const Eigen::MatrixXd Minv = M.inverse();
  EXPECT_GE(Minv.minCoeff(), 0.0);
  const Field w = random_nodal_field(g, rng);
  const Eigen::VectorXd oracle = Minv * to_eigen(w);
  EXPECT_LT((to_eigen(op.factorized_inverse(w)) - oracle).cwiseAbs().maxCoeff(),
            1e-8 * oracle.cwiseAbs().maxCoeff());
  const Eigen::MatrixXd F = dense_from_operator([&](const Field& x, Field& y) { y = op.apply_forward_star(x); }, g);
  EXPECT_LT((F - M).cwiseAbs().maxCoeff(), 1e-8 * M.cwiseAbs().maxCoeff());
}

TEST(MaxPrinciple, ReferenceProblemHasNoViolations) {
  const Grid g(3, 2.0, 9);
  const ReducedOperator op = reference_operator(g);
  const MaxPrincipleReport rep = maxprinciple_check(op, 50, 99);
  EXPECT_EQ(rep.trials, 50);
  EXPECT_EQ(rep.violations_factorized, 0);
  EXPECT_EQ(rep.violations_b, 0);
  EXPECT_EQ(rep.not_strict_factorized, 0);
  EXPECT_EQ(rep.not_strict_b, 0);
  EXPECT_GT(rep.worst_min_factorized, 0.0);
}

TEST(MaxPrinciple, DenseInverseIsNonnegative) {
  const Grid g(2, 1.0, 9);
  const Field a(g, 1.0);
  const Field b(g, 3.0);
  EXPECT_GE(dense_forward_star(g, a, b, 1.0).inverse().minCoeff(), 0.0);
  Eigen::MatrixXd B = dense_laplacian(g);
  B.diagonal().array() += 3.0;
  EXPECT_GE(B.inverse().minCoeff(), 0.0);
}
