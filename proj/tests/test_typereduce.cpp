#include <gtest/gtest.h>

#include <numeric>

#include "fmorrap/error.hpp"
#include "fmorrap/typereduce.hpp"
#include "test_util.hpp"

using namespace fmorrap;

namespace {

SampledIt2 five_point() {
  return SampledIt2({0.0, 0.25, 0.5, 0.75, 1.0}, {0.0, 0.2, 0.4, 0.2, 0.0}, {0.1, 0.6, 1.0, 0.6, 0.1});
}

double crisp_centroid(std::span<const double> x, std::span<const double> mu) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += x[i] * mu[i];
    den += mu[i];
  }
  return num / den;
}

}  // namespace

TEST(Ekm, FivePointInstanceMatchesEnumerationOracle) {
  // Exhaustive 2^5 embedded-set enumeration in exact arithmetic: 5/13, 8/13.
  const SampledIt2 s = five_point();
  EXPECT_NEAR(ekm_left(s), 5.0 / 13.0, 1e-12);
  EXPECT_NEAR(ekm_right(s), 8.0 / 13.0, 1e-12);
  const CentroidInterval bf = brute_force_centroid(s);
  EXPECT_NEAR(ekm_left(s), bf.left, 1e-12);
  EXPECT_NEAR(ekm_right(s), bf.right, 1e-12);
  EXPECT_NEAR(defuzzify(s), 0.5, 1e-12);
}

TEST(Ekm, AsymmetricSevenPointInstance) {
  std::vector<double> grid(7);
  for (int i = 0; i < 7; ++i) grid[i] = i / 6.0;
  const SampledIt2 s(grid, {0.0, 0.1, 0.3, 0.7, 0.2, 0.1, 0.0}, {0.2, 0.5, 0.8, 1.0, 0.9, 0.4, 0.1});
  EXPECT_NEAR(ekm_left(s), 0.36666666666666664, 1e-12);
  EXPECT_NEAR(ekm_right(s), 0.59999999999999998, 1e-12);
}

TEST(Ekm, TwoPointHandEnumeration) {
  const SampledIt2 s({0.0, 1.0}, {0.5, 0.5}, {1.0, 1.0});
  EXPECT_NEAR(ekm_left(s), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(ekm_right(s), 2.0 / 3.0, 1e-15);
  const CentroidInterval bf = brute_force_centroid(s);
  EXPECT_NEAR(bf.left, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(bf.right, 2.0 / 3.0, 1e-15);
}

TEST(Ekm, Type1InputGivesCrispCentroid) {
  const std::vector<double> grid = uniform_grid(0.0, 2.0, 9);
  const std::vector<double> mu{0.0, 0.1, 0.4, 0.9, 1.0, 0.3, 0.2, 0.05, 0.0};
  const SampledIt2 s(grid, mu, mu);
  const double c = crisp_centroid(grid, mu);
  const CentroidInterval ci = centroid_interval(s);
  EXPECT_NEAR(ci.left, c, 1e-12);
  EXPECT_NEAR(ci.right, c, 1e-12);
  EXPECT_LE(ci.left, ci.right);
  EXPECT_NEAR(defuzzify(s), c, 1e-12);
}

TEST(Ekm, SymmetricFootprint) {
  const SampledIt2 s({-2.0, -1.0, 0.0, 1.0, 2.0}, {0.0, 0.3, 0.5, 0.3, 0.0}, {0.2, 0.8, 1.0, 0.8, 0.2});
  const CentroidInterval ci = centroid_interval(s);
  EXPECT_NEAR(ci.left, -ci.right, 1e-12);
  EXPECT_NEAR(defuzzify(s), 0.0, 1e-12);
}

TEST(Ekm, ZeroMassIsDegenerate) {
  const auto grid = uniform_grid(0.0, 1.0, 5);
  try {
    ekm_left(zero_membership(grid));
    FAIL() << "expected a degenerate error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate);
  }
  EXPECT_THROW(ekm_right(zero_membership(grid)), Error);
  EXPECT_THROW(brute_force_centroid(zero_membership(grid)), Error);
}

TEST(Ekm, MassOnlyAtEdgesAndSpikes) {
  const auto grid = uniform_grid(0.0, 1.0, 11);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> mu(grid.size(), 0.0);
    mu[k] = 1.0;
    const SampledIt2 spike(grid, mu, mu);
    EXPECT_DOUBLE_EQ(ekm_left(spike), grid[k]);
    EXPECT_DOUBLE_EQ(ekm_right(spike), grid[k]);
    std::vector<double> lo(grid.size(), 0.0);
    const SampledIt2 upper_only(grid, lo, mu);
    EXPECT_DOUBLE_EQ(ekm_left(upper_only), grid[k]);
    EXPECT_DOUBLE_EQ(ekm_right(upper_only), grid[k]);
  }
}

TEST(EkmProperty, WideningUpperNeverShrinksInterval) {
  RandomStream rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const SampledIt2 a = fixtures::random_sampled(rng, 3 + rng.index(30));
    std::vector<double> up(a.upper().begin(), a.upper().end());
    for (double& u : up) u = std::min(1.0, u + 0.3 * rng.uniform());
    const SampledIt2 b({a.grid().begin(), a.grid().end()}, {a.lower().begin(), a.lower().end()}, up);
    EXPECT_GE(ekm_right(b), ekm_right(a) - 1e-12);
    EXPECT_LE(ekm_left(b), ekm_left(a) + 1e-12);
  }
}

TEST(EkmProperty, IntervalInsideGridAndOrdered) {
  RandomStream rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const SampledIt2 s = fixtures::random_sampled(rng, 2 + rng.index(100));
    const CentroidInterval ci = centroid_interval(s);
    EXPECT_LE(ci.left, ci.right);
    EXPECT_GE(ci.left, s.grid().front() - 1e-12);
    EXPECT_LE(ci.right, s.grid().back() + 1e-12);
  }
}

TEST(EkmProperty, MatchesBruteForceWithBoundedIterations) {
  RandomStream rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + rng.index(62);
    const SampledIt2 s = fixtures::random_sampled(rng, n);
    const EkmEnd l = ekm_left_detail(s);
    const EkmEnd r = ekm_right_detail(s);
    const CentroidInterval bf = brute_force_centroid(s);
    EXPECT_NEAR(l.value, bf.left, 1e-9);
    EXPECT_NEAR(r.value, bf.right, 1e-9);
    EXPECT_LE(l.iterations, n);
    EXPECT_LE(r.iterations, n);
  }
}

TEST(BruteForce, RefusesHugeInputs) {
  const auto grid = uniform_grid(0.0, 1.0, 5000);
  EXPECT_THROW(brute_force_centroid(full_membership(grid)), Error);
}
