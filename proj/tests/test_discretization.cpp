#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "exactmg/discretization.hpp"
#include "oracles.hpp"

using namespace exactmg;
using std::numbers::pi;

TEST(Grid, ValidityAndDerivedSizes) {
  EXPECT_THROW(Grid1D(3), configuration_error);
  EXPECT_THROW(Grid1D(6), configuration_error);
  EXPECT_THROW(Grid1D(0), configuration_error);
  const Grid1D g(33);
  EXPECT_EQ(g.unknowns(), 31u);
  EXPECT_EQ(g.coarse_unknowns(), 15u);
  EXPECT_EQ(g.middle_mode(), 16u);
  EXPECT_DOUBLE_EQ(g.spacing(), 1.0 / 32.0);
  EXPECT_EQ(g.power_of_two_exponent(), 5u);
  EXPECT_FALSE(Grid1D(11).power_of_two_exponent());
  EXPECT_EQ(g.coarsened(), Grid1D(17));
}

TEST(Stiffness, FivePoints) {
  const auto a = assemble_stiffness(Grid1D(5));
  EXPECT_EQ(a.diag, (Vector{32, 32, 32}));
  EXPECT_EQ(a.sub, (Vector{-16, -16}));
  EXPECT_EQ(a.sup, (Vector{-16, -16}));
}

TEST(Stiffness, NinePoints) {
  const auto a = assemble_stiffness(Grid1D(9));
  for (double d : a.diag) EXPECT_DOUBLE_EQ(d, 128.0);
  for (double s : a.sub) EXPECT_DOUBLE_EQ(s, -64.0);
  EXPECT_TRUE(a.symmetric());
}

TEST(Stiffness, MatchesDenseOracle) {
  for (std::size_t n : {5u, 9u, 17u}) {
    const DenseMatrix got = assemble_stiffness(Grid1D(n)).to_dense();
    const auto ref = oracle::stiffness(n);
    for (std::size_t i = 0; i < n - 2; ++i)
      for (std::size_t j = 0; j < n - 2; ++j) EXPECT_DOUBLE_EQ(got(i, j), ref[i][j]);
  }
}

TEST(Eigenvector, ExactSines) {
  const Grid1D g(5);
  const Vector v2 = eigenvector(g, 2);
  EXPECT_NEAR(v2[0], 1.0, 1e-15);
  EXPECT_NEAR(v2[1], 0.0, 1e-15);
  EXPECT_NEAR(v2[2], -1.0, 1e-15);
  const Vector v1 = eigenvector(g, 1);
  EXPECT_NEAR(v1[0], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(v1[1], 1.0, 1e-15);
  EXPECT_NEAR(v1[2], std::sqrt(0.5), 1e-15);
  EXPECT_THROW(eigenvector(g, 0), index_error);
  EXPECT_THROW(eigenvector(g, 4), index_error);
}

TEST(Eigenvalue, FivePointValues) {
  const Grid1D g(5);
  EXPECT_NEAR(eigenvalue_A(g, 2), 32.0, 1e-12);
  EXPECT_NEAR(eigenvalue_A(g, 1), 64.0 * (1.0 - std::cos(pi / 4)) / 2.0, 1e-12);
  EXPECT_NEAR(eigenvalue_A(g, 1), 9.37258300203048, 1e-10);
  EXPECT_NEAR(eigenvalue_A(g, 1) + eigenvalue_A(g, 3), 64.0, 1e-12);
  EXPECT_THROW(eigenvalue_A(g, 4), index_error);
}

TEST(Eigenpairs, ResidualAgainstStiffness) {
  for (std::size_t n : {5u, 9u, 17u, 33u}) {
    const Grid1D g(n);
    const auto a = assemble_stiffness(g);
    for (std::size_t k = 1; k <= g.unknowns(); ++k) {
      const Vector v = eigenvector(g, k);
      const double lam = eigenvalue_A(g, k);
      EXPECT_LE(norm_inf(axpy(-lam, v, a.apply(v))), 1e-10 * lam) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Eigenpairs, ComplementPairing) {
  const Grid1D g(33);
  const double four_over_h2 = 4.0 * g.inv_spacing_squared();
  for (std::size_t k = 1; k <= g.unknowns(); ++k) {
    const std::size_t kc = complementary_mode(g, k);
    EXPECT_NEAR(eigenvalue_A(g, kc), four_over_h2 * mode_cos2(g, k), 1e-10 * four_over_h2);
  }
}

TEST(Eigenvectors, PairwiseOrthogonal) {
  for (std::size_t n : {5u, 9u, 17u, 33u}) {
    const Grid1D g(n);
    for (std::size_t j = 1; j <= g.unknowns(); ++j) {
      const Vector vj = eigenvector(g, j);
      for (std::size_t k = j + 1; k <= g.unknowns(); ++k) {
        const Vector vk = eigenvector(g, k);
        EXPECT_LE(std::abs(dot(vj, vk)), 1e-10 * norm2(vj) * norm2(vk));
      }
    }
  }
}

TEST(Eigenvalues, StrictlyIncreasing) {
  for (std::size_t n : {5u, 9u, 17u, 33u, 129u}) {
    const Grid1D g(n);
    for (std::size_t k = 1; k < g.unknowns(); ++k) EXPECT_LT(eigenvalue_A(g, k), eigenvalue_A(g, k + 1));
  }
}

TEST(Problem, ZeroForcing) {
  const Grid1D g(9);
  const auto p = make_problem(g, [](double) { return 0.0; });
  EXPECT_EQ(p.rhs_values, Vector(7, 0.0));
  EXPECT_EQ(thomas_solve(assemble_stiffness(g), p.rhs_values), Vector(7, 0.0));
  EXPECT_FALSE(p.exact_solution);
}

TEST(Problem, ConstantForcing) {
  const auto p = make_problem(Grid1D(5), [](double) { return 1.0; });
  EXPECT_EQ(p.rhs_values, (Vector{1, 1, 1}));
}

TEST(Problem, ManufacturedSolutionIsSecondOrder) {
  // Measure C = max error / h^2 on successive grids; it must settle rather than grow.
  std::vector<double> ratios;
  for (std::size_t n : {9u, 17u, 33u, 65u, 129u}) {
    const Grid1D g(n);
    const auto p = make_problem(g, [](double x) { return pi * pi * std::sin(pi * x); },
                                [](double x) { return std::sin(pi * x); });
    ASSERT_TRUE(p.exact_solution);
    const Vector u = thomas_solve(assemble_stiffness(g), p.rhs_values);
    const double err = norm_inf(subtract(u, *p.exact_solution));
    ratios.push_back(err / (g.spacing() * g.spacing()));
  }
  // The nodal error is sin(pi x)(pi^2 / lambda_1 - 1), whose h^2 constant is pi^2/12.
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    EXPECT_GT(ratios[i], pi * pi / 12.0 - 1e-6);
    EXPECT_LT(ratios[i], pi * pi / 12.0 + 1e-2);
    if (i) EXPECT_LT(ratios[i], ratios[i - 1]);
  }
  EXPECT_NEAR(ratios.back(), pi * pi / 12.0, 1e-4);
}
