#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "gvfls/diagnostics.hpp"
#include "gvfls/viscosity.hpp"

using namespace gvfls;

TEST(Projection, AxisCase) {
  const auto A = projection_matrix({1.0, 0.0});
  EXPECT_EQ(A.a11, 0.0);
  EXPECT_EQ(A.a12, 0.0);
  EXPECT_EQ(A.a22, 1.0);
  EXPECT_THROW(projection_matrix({0.0, 0.0}), ValidationError);
}

TEST(Projection, ExtremeMagnitudes) {
  for (double s : {1e-300, 1e-200, 1.0, 1e200, 1e300}) {
    const auto A = projection_matrix({3.0 * s, 4.0 * s});
    EXPECT_NEAR(A.a11, 16.0 / 25.0, 1e-15);
    EXPECT_NEAR(A.a12, -12.0 / 25.0, 1e-15);
    EXPECT_NEAR(A.a22, 9.0 / 25.0, 1e-15);
  }
}

TEST(Hamiltonian, HandExample) {
  const HamiltonianSample s{1.0, 0.0, {1.0, 0.0}, 1.0};
  EXPECT_NEAR(hamiltonian(s, {0.0, 1.0}, SymMatrix2::identity()), -1.0, 1e-15);
}

TEST(Hamiltonian, TraceTermVanishesAtZeroMatrix) {
  const HamiltonianSample s{0.7, -0.4, {0.3, -0.5}, 2.0};
  const Vec2 p{1.5, -2.0};
  const double expect = 0.7 * -0.4 * 2.5 + 0.7 * 0.6 * (0.3 * 1.5 + 0.5 * 2.0);
  EXPECT_NEAR(hamiltonian(s, p, SymMatrix2{}), expect, 1e-14);
}

TEST(Hamiltonian, ZeroIndicatorGivesZero) {
  const HamiltonianSample s{0.0, 0.9, {0.1, 0.2}, 3.0};
  EXPECT_EQ(hamiltonian(s, {2.0, 1.0}, SymMatrix2{4.0, -1.0, 2.0}), 0.0);
}

TEST(Hamiltonian, SampleValidation) {
  EXPECT_THROW((HamiltonianSample{1.2, 0.0, {}, 1.0}.validate()), ValidationError);
  EXPECT_THROW((HamiltonianSample{0.5, -1.1, {}, 1.0}.validate()), ValidationError);
  EXPECT_THROW((HamiltonianSample{0.5, 0.0, {1.0, 1.0}, 1.0}.validate()), ValidationError);
  EXPECT_THROW((HamiltonianSample{0.5, 0.0, {}, -1.0}.validate()), ValidationError);
  EXPECT_NO_THROW((HamiltonianSample{0.5, 0.0, {0.6, 0.8}, 1.0}.validate()));
}

TEST(Properness, IdentityAboveZero) {
  for (double g : {0.0, 0.3, 1.0})
    for (double H : {-1.0, 0.0, 0.5})
      for (Vec2 p : {Vec2{1, 0}, Vec2{-3, 2}, Vec2{1e-5, 1e5}})
        EXPECT_TRUE(check_properness({g, H, {0.2, 0.1}, 1.5}, p, SymMatrix2::identity(), SymMatrix2{}));
}

TEST(Properness, EqualMatricesAreEqualValues) {
  const HamiltonianSample s{0.4, 0.2, {0.5, 0.5}, 0.8};
  const SymMatrix2 X{1.0, 2.0, -3.0};
  EXPECT_TRUE(check_properness(s, {1.0, 1.0}, X, X));
  EXPECT_EQ(hamiltonian(s, {1.0, 1.0}, X), hamiltonian(s, {1.0, 1.0}, X));
}

TEST(Properness, RequiresLoewnerOrder) {
  EXPECT_THROW(check_properness({0.5, 0, {}, 1}, {1, 0}, SymMatrix2{}, SymMatrix2::identity()), ValidationError);
}

TEST(Rho, HandValues) {
  EXPECT_EQ(rho({1, 2}, {1, 2}), 0.0);
  EXPECT_DOUBLE_EQ(rho({1, 0}, {0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(rho({2, 0}, {1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(rho({4, 0}, {3, 0}), 1.0 / 3.0);
  EXPECT_THROW(rho({0, 0}, {1, 0}), ValidationError);
}

TEST(DirectionLemma, HandValues) {
  const auto same = direction_lemma({3, 4}, {3, 4});
  EXPECT_TRUE(same.holds);
  EXPECT_EQ(same.lhs, 0.0);
  const auto anti = direction_lemma({1, 0}, {-1, 0});
  EXPECT_DOUBLE_EQ(anti.lhs, 2.0);
  EXPECT_DOUBLE_EQ(anti.rhs, 2.0);
  EXPECT_TRUE(anti.holds);
  EXPECT_TRUE(check_direction_lemma({1e-310, 0}, {0, 3e-320}));
  EXPECT_TRUE(check_direction_lemma({1e300, 1e300}, {-1e-300, 2e-300}));
}

TEST(Suites, RandomizedChecksPass) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto a = properness_suite(42, 20000);
  const auto b = direction_lemma_suite(43, 20000);
  const auto c = projection_suite(44, 5000);
  EXPECT_TRUE(a.passed()) << a.failures << " worst " << a.worst;
  EXPECT_TRUE(b.passed()) << b.failures << " worst " << b.worst;
  EXPECT_TRUE(c.passed()) << c.failures << " worst " << c.worst;
  EXPECT_EQ(a.draws, 20000);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 5.0);
}

TEST(Suites, SeededAndReproducible) {
  const auto a = properness_suite(5, 1000), b = properness_suite(5, 1000), c = properness_suite(6, 1000);
  EXPECT_EQ(a.worst, b.worst);
  EXPECT_NE(a.worst, c.worst);
}

TEST(Suites, DetectsABrokenProperty) {
  // Sanity check of the harness itself: the reverse order violates properness
  // for a strictly positive trace weight.
  const HamiltonianSample s{1.0, 0.0, {}, 1.0};
  EXPECT_GT(hamiltonian(s, {1, 0}, SymMatrix2{}), hamiltonian(s, {1, 0}, SymMatrix2::identity()));
}
