#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "accretia/banach.hpp"
#include "support.hpp"

using namespace accretia;
using accretia::gen::Rng;

namespace {

SmoothnessModulus identity_tau() { return {[](double e) { return e; }, "t"}; }

}  // namespace

TEST(Vector, RejectsNonFiniteCoordinates) {
  EXPECT_THROW(Vector({1.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
  EXPECT_THROW(Vector({std::numeric_limits<double>::infinity()}), std::invalid_argument);
  EXPECT_NO_THROW(Vector({0.0, -1e300}));
}

TEST(Space, RejectsExponentsOutsideOpenInterval) {
  EXPECT_THROW(SpaceInstance(2, 1.0), std::invalid_argument);
  EXPECT_THROW(SpaceInstance(2, 0.5), std::invalid_argument);
  EXPECT_THROW(SpaceInstance(2, std::numeric_limits<double>::infinity()), std::invalid_argument);
  EXPECT_THROW(SpaceInstance(0, 2.0), std::invalid_argument);
}

TEST(Space, DualExponentIsConjugate) {
  for (double p : {1.1, 1.5, 2.0, 3.0, 4.0, 10.0}) {
    const SpaceInstance s(3, p);
    EXPECT_NEAR(1.0 / p + 1.0 / s.dual_exponent(), 1.0, 1e-15) << p;
  }
}

TEST(Norm, Examples) {
  EXPECT_DOUBLE_EQ(norm(SpaceInstance(2, 2.0), Vector{3.0, 4.0}), 5.0);
  EXPECT_NEAR(norm(SpaceInstance(2, 4.0), Vector{1.0, 1.0}), std::pow(2.0, 0.25), 1e-15);
  for (double p : {1.5, 2.0, 4.0}) EXPECT_EQ(norm(SpaceInstance(3, p), Vector(3)), 0.0);
}

TEST(Norm, DimensionMismatchThrows) {
  EXPECT_THROW((void)norm(SpaceInstance(3, 2.0), Vector{1.0, 2.0}), std::invalid_argument);
}

TEST(Norm, NoOverflowOnHugeCoordinates) {
  const SpaceInstance s(2, 4.0);
  const double big = 1e200;
  EXPECT_NEAR(norm(s, Vector{big, big}) / big, std::pow(2.0, 0.25), 1e-14);
}

TEST(DualityMap, Examples) {
  const SpaceInstance h(2, 2.0);
  const Vector j = duality_map(h, Vector{3.0, 4.0});
  EXPECT_DOUBLE_EQ(j[0], 3.0);
  EXPECT_DOUBLE_EQ(j[1], 4.0);

  const SpaceInstance l4(2, 4.0);
  const Vector j4 = duality_map(l4, Vector{1.0, 1.0});
  EXPECT_NEAR(j4[0], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(j4[1], std::sqrt(0.5), 1e-15);
  // <x, j> = ||x||^2 = sqrt(2) and ||j||_{4/3} = ||x||_4 = 2^(1/4).
  EXPECT_NEAR(dual_pair(l4, Vector{1.0, 1.0}, j4), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(dual_norm(l4, j4), std::pow(2.0, 0.25), 1e-15);

  for (double p : {1.5, 2.0, 4.0}) EXPECT_TRUE(duality_map(SpaceInstance(3, p), Vector(3)).is_zero());
}

TEST(DualPair, Examples) {
  const SpaceInstance s(2, 3.0);
  EXPECT_EQ(dual_pair(s, Vector{1.0, 0.0}, Vector{0.0, 1.0}), 0.0);
  EXPECT_EQ(dual_pair(s, Vector(2), Vector{5.0, -7.0}), 0.0);
}

TEST(DualityMap, IdentitiesOnRandomSamples) {
  Rng rng(101);
  for (int i = 0; i < 10'000; ++i) {
    const std::size_t dim = gen::uniform_index(rng, 1, 8);
    const SpaceInstance s(dim, gen::gen_exponent(rng));
    const Vector x = gen::gen_vector(rng, dim);
    const Vector j = duality_map(s, x);
    const double nx = norm(s, x);
    ASSERT_LE(std::abs(dual_pair(s, x, j) - nx * nx), 1e-9 * (1.0 + nx * nx)) << "p=" << s.p();
    ASSERT_LE(std::abs(dual_norm(s, j) - nx), 1e-9 * (1.0 + nx)) << "p=" << s.p();
    // Hoelder bound on an independent y.
    const Vector y = gen::gen_vector(rng, dim);
    ASSERT_LE(std::abs(dual_pair(s, y, j)), norm(s, y) * dual_norm(s, j) * (1.0 + 1e-12) + 1e-300);
  }
}

TEST(DualityMap, PositiveHomogeneity) {
  Rng rng(102);
  for (int i = 0; i < 2000; ++i) {
    const std::size_t dim = gen::uniform_index(rng, 1, 6);
    const SpaceInstance s(dim, gen::gen_exponent(rng));
    const Vector x = gen::gen_vector(rng, dim);
    const double lambda = std::pow(10.0, gen::uniform(rng, -2.0, 2.0));
    const Vector lhs = duality_map(s, lambda * x);
    const Vector rhs = lambda * duality_map(s, x);
    const double scale = 1.0 + dual_norm(s, rhs);
    ASSERT_LE(dual_norm(s, lhs - rhs), 1e-9 * scale);
  }
}

TEST(SubdiffInequality, Examples) {
  const SpaceInstance s0(3, 4.0);
  const auto zero = check_subdiff_inequality(s0, Vector(3), Vector(3));
  EXPECT_TRUE(zero.holds);
  EXPECT_EQ(zero.slack, 0.0);

  // 4 <= 1 + 2 * 1 * 2 = 5.
  const auto one = check_subdiff_inequality(SpaceInstance(1, 2.0), Vector{1.0}, Vector{1.0});
  EXPECT_TRUE(one.holds);
  EXPECT_DOUBLE_EQ(one.slack, 1.0);
}

TEST(SubdiffInequality, HoldsOnRandomL4Samples) {
  Rng rng(103);
  const SpaceInstance s(8, 4.0);
  for (int i = 0; i < 10'000; ++i) {
    const auto r = check_subdiff_inequality(s, gen::gen_vector(rng, 8), gen::gen_vector(rng, 8));
    ASSERT_TRUE(r.holds) << "slack " << r.slack;
  }
}

TEST(OmegaTau, Examples) {
  const auto tau = identity_tau();
  EXPECT_NEAR(omega_tau(tau, 1.0, 1.0), 1.0 / 24.0, 1e-15);
  EXPECT_NEAR(omega_tau(tau, 0.5, 1.0), 1.0 / 24.0, 1e-15);
  EXPECT_NEAR(omega_tau(tau, 1.0, 3.0), 1.0 / 3.0, 1e-15);
  // eps^2/(12 d) * tau(eps/(2d)) evaluated by hand at d = 4, eps = 1: 1/48 * 1/8.
  EXPECT_NEAR(omega_tau(tau, 4.0, 1.0), 1.0 / 384.0, 1e-15);
}

TEST(OmegaTau, RejectsNonpositiveArguments) {
  const auto tau = identity_tau();
  EXPECT_THROW((void)omega_tau(tau, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW((void)omega_tau(tau, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW((void)omega_tau(tau, -1.0, 1.0), std::invalid_argument);
}

TEST(Smoothness, IdentityTauPassesInHilbertSpace) {
  for (std::size_t dim : {1u, 2u, 4u}) {
    const auto report = validate_smoothness(SpaceInstance(dim, 2.0), identity_tau(), 10'000, 7);
    EXPECT_TRUE(report.ok()) << report.violations.size() << " violations in dim " << dim;
    EXPECT_EQ(report.samples, 10'000u);
  }
}

TEST(Smoothness, OversizedTauIsCaught) {
  const SmoothnessModulus big{[](double e) { return 10.0 * e; }, "10*t"};
  EXPECT_FALSE(validate_smoothness(SpaceInstance(2, 2.0), big, 4000, 7).violations.empty());
}

TEST(Smoothness, NonpositiveTauIsReported) {
  const SmoothnessModulus bad{[](double e) { return e > 0.1 ? e : 0.0; }, "broken"};
  EXPECT_FALSE(validate_smoothness(SpaceInstance(2, 2.0), bad, 200, 7).nonpositive_tau.empty());
}

// ||x||, ||y|| <= d and ||x - y|| <= omega_tau(d, eps) imply ||Jx - Jy|| <= eps.
TEST(DualityMap, UniformlyContinuousUnderOmegaTau) {
  Rng rng(104);
  const auto tau = identity_tau();
  for (int i = 0; i < 10'000; ++i) {
    const std::size_t dim = gen::uniform_index(rng, 1, 6);
    const SpaceInstance s(dim, 2.0);
    const double d = std::pow(10.0, gen::uniform(rng, -1.0, 1.0));
    const double eps = std::pow(10.0, gen::uniform(rng, -3.0, 0.5));
    const double w = omega_tau(tau, d, eps);
    const Vector x = gen::gen_in_ball(rng, s, d * (1.0 - 1e-12));
    const Vector step = gen::gen_in_ball(rng, s, w);
    const Vector y = x + step;
    if (norm(s, y) > d) continue;
    ASSERT_LE(dual_norm(s, duality_map(s, x) - duality_map(s, y)), eps + 1e-9);
  }
}
