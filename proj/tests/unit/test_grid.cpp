#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fhnvs/error.hpp"
#include "fhnvs/grid.hpp"

using namespace fhnvs;

TEST(Grid, SpacingAndWeight) {
  const Grid g(3, 5.0, 15);
  EXPECT_DOUBLE_EQ(g.spacing(), 10.0 / 16.0);
  EXPECT_DOUBLE_EQ(g.quad_weight(), std::pow(10.0 / 16.0, 3));
  EXPECT_EQ(g.size(), 15u * 15u * 15u);
}

TEST(Grid, RejectsBadParameters) {
  EXPECT_THROW(Grid(0, 1.0, 5), InvalidArgument);
  EXPECT_THROW(Grid(4, 1.0, 5), InvalidArgument);
  EXPECT_THROW(Grid(2, 0.0, 5), InvalidArgument);
  EXPECT_THROW(Grid(2, -1.0, 5), InvalidArgument);
  EXPECT_THROW(Grid(2, 1.0, 2), InvalidArgument);
}

TEST(Grid, IndexRoundTripAndLastAxisFastest) {
  const Grid g(3, 1.0, 4);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.flat(g.index(i)), i);
  EXPECT_EQ(g.stride(2), 1u);
  EXPECT_EQ(g.stride(1), 4u);
  EXPECT_EQ(g.stride(0), 16u);
  const auto idx = g.index(1);
  EXPECT_EQ(idx[0], 1);
  EXPECT_EQ(idx[1], 1);
  EXPECT_EQ(idx[2], 2);
}

TEST(Grid, CoordinatesAreSymmetric) {
  const Grid g(1, 2.0, 7);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(g.coord(i)[0], -g.coord(g.size() - 1 - i)[0], 1e-15);
  }
  EXPECT_NEAR(g.coord(3)[0], 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(g.coord(0)[0], -2.0 + g.spacing());
}

TEST(Field, ArithmeticAndMismatch) {
  const Grid g(2, 1.0, 5);
  Field a(g, 2.0);
  Field b(g, 3.0);
  EXPECT_DOUBLE_EQ((a + b)[7], 5.0);
  EXPECT_DOUBLE_EQ((a - b)[7], -1.0);
  EXPECT_DOUBLE_EQ((2.0 * a)[0], 4.0);
  EXPECT_DOUBLE_EQ((-a)[0], -2.0);
  a.axpy(-2.0, b);
  EXPECT_DOUBLE_EQ(a.min(), -4.0);
  EXPECT_DOUBLE_EQ(dot(b, b), 9.0 * g.size());
  const Grid other(2, 1.0, 6);
  Field c(other);
  EXPECT_THROW(a += c, GridMismatch);
  EXPECT_THROW(Field(g, std::vector<double>(3)), GridMismatch);
}

TEST(Field, SignedParts) {
  const Grid g(1, 1.0, 5);
  const Field u = Field::sample(g, [](const Point& x) { return x[0]; });
  const Field p = positive_part(u);
  const Field m = negative_part(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_GE(p[i], 0.0);
    EXPECT_LE(m[i], 0.0);
    EXPECT_DOUBLE_EQ(p[i] + m[i], u[i]);
    EXPECT_DOUBLE_EQ(p[i] * m[i], 0.0);
  }
  EXPECT_DOUBLE_EQ(hadamard(u, u)[0], u[0] * u[0]);
}

TEST(Field, FinitenessAndExtremes) {
  const Grid g(1, 1.0, 4);
  Field f(g, 1.0);
  f[2] = -7.0;
  EXPECT_DOUBLE_EQ(f.max_abs(), 7.0);
  EXPECT_TRUE(f.all_finite());
  f[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(f.all_finite());
}
