#include <gtest/gtest.h>

#include <cmath>

#include "fmorrap/error.hpp"
#include "fmorrap/random.hpp"
#include "fmorrap/stats.hpp"

using namespace fmorrap;

TEST(Describe, Basics) {
  const std::vector<double> one{5.0};
  const SampleSummary s1 = describe(one);
  EXPECT_EQ(s1.mean, 5.0);
  EXPECT_EQ(s1.median, 5.0);
  EXPECT_FALSE(s1.sd.has_value());
  EXPECT_THROW(sample_sd(one), Error);

  const std::vector<double> four{4.0, 1.0, 3.0, 2.0};
  const SampleSummary s4 = describe(four);
  EXPECT_DOUBLE_EQ(s4.mean, 2.5);
  EXPECT_DOUBLE_EQ(s4.median, 2.5);
  EXPECT_NEAR(*s4.sd, 1.2909944487358056, 1e-12);
  EXPECT_EQ(s4.min, 1.0);
  EXPECT_EQ(s4.max, 4.0);

  const std::vector<double> constant{3.0, 3.0, 3.0};
  EXPECT_EQ(*describe(constant).sd, 0.0);
  EXPECT_THROW(describe(std::vector<double>{}), Error);
}

TEST(TTest, PooledHandCase) {
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  const TTestResult r = t_test(a, b);
  EXPECT_NEAR(r.t, -3.6742346141747673, 1e-12);
  EXPECT_EQ(r.df, 4.0);
  EXPECT_NEAR(r.p, 0.021311641128756727, 1e-12);
}

TEST(TTest, MatchesReferenceImplementation) {
  const std::vector<double> a{0.81, 0.85, 0.79, 0.88, 0.83, 0.86}, b{0.78, 0.80, 0.77, 0.84, 0.79};
  const TTestResult pooled = t_test(a, b);
  EXPECT_NEAR(pooled.t, 2.19134177578932, 1e-10);
  EXPECT_NEAR(pooled.p, 0.0561273514593551, 1e-10);
  const TTestResult welch = t_test(a, b, TTestKind::welch);
  EXPECT_NEAR(welch.t, 2.23712035096327, 1e-10);
  EXPECT_NEAR(welch.df, 8.9997507043873, 1e-9);
  EXPECT_NEAR(welch.p, 0.052088440029704, 1e-10);
}

TEST(TTest, IdenticalSamples) {
  const std::vector<double> a{0.3, 0.7, 0.5, 0.9};
  const TTestResult r = t_test(a, a);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_EQ(r.p, 1.0);
}

TEST(TTest, DegenerateAndTooSmall) {
  const std::vector<double> c1{2, 2, 2}, c2{3, 3, 3};
  try {
    t_test(c1, c2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate);
  }
  const TTestResult same = t_test(c1, c1);
  EXPECT_EQ(same.t, 0.0);
  EXPECT_EQ(same.p, 1.0);
  EXPECT_THROW(t_test(std::vector<double>{1.0}, c2), Error);
}

TEST(Anova, ReferenceAndIdentity) {
  const std::vector<std::vector<double>> g{{1, 2, 3, 4}, {2, 4, 6}, {5, 5.5, 7, 8, 9}};
  const AnovaResult r = anova_f(g);
  EXPECT_NEAR(r.f, 8.37319214876034, 1e-10);
  EXPECT_NEAR(r.p, 0.00882811901380129, 1e-10);
  EXPECT_EQ(r.df_between, 2.0);
  EXPECT_EQ(r.df_within, 9.0);

  const std::vector<std::vector<double>> two{{1, 2, 3}, {4, 5, 6}};
  EXPECT_NEAR(anova_f(two).f, 13.5, 1e-9);
  const std::vector<std::vector<double>> same{{1, 2, 3}, {1, 2, 3}};
  EXPECT_EQ(anova_f(same).f, 0.0);
  EXPECT_EQ(anova_f(same).p, 1.0);
  const std::vector<std::vector<double>> single{{1, 2, 3}};
  EXPECT_THROW(anova_f(single), Error);
  const std::vector<std::vector<double>> flat{{1, 1}, {2, 2}};
  EXPECT_THROW(anova_f(flat), Error);
}

TEST(StatsProperty, SymmetryTranslationAndTwoGroupIdentity) {
  RandomStream rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> a(2 + rng.index(20)), b(2 + rng.index(20));
    for (double& v : a) v = rng.uniform(-3.0, 3.0);
    for (double& v : b) v = rng.uniform(-2.0, 4.0);
    const TTestResult ab = t_test(a, b);
    const TTestResult ba = t_test(b, a);
    EXPECT_NEAR(ab.t, -ba.t, 1e-12);
    EXPECT_NEAR(ab.p, ba.p, 1e-14);
    EXPECT_GE(ab.p, 0.0);
    EXPECT_LE(ab.p, 1.0);

    const double shift = rng.uniform(-100.0, 100.0);
    std::vector<double> as = a, bs = b;
    for (double& v : as) v += shift;
    for (double& v : bs) v += shift;
    EXPECT_NEAR(t_test(as, bs).t, ab.t, 1e-8 * (1.0 + std::abs(ab.t)));

    const std::vector<std::vector<double>> groups{a, b};
    const AnovaResult f = anova_f(groups);
    EXPECT_NEAR(f.f, ab.t * ab.t, 1e-9 * std::max(1.0, f.f));
    EXPECT_NEAR(f.p, ab.p, 1e-9);
  }
}

TEST(StatsProperty, PValuesMonotoneInStatistic) {
  for (double df : {1.0, 4.0, 30.0}) {
    double prev = 1.0;
    for (double t = 0.0; t < 10.0; t += 0.25) {
      const double p = student_two_sided_p(t, df);
      EXPECT_LE(p, prev);
      EXPECT_GE(p, 0.0);
      prev = p;
    }
  }
  double prev = 1.0;
  for (double f = 0.0; f < 50.0; f += 0.5) {
    const double p = f_upper_p(f, 2.0, 9.0);
    EXPECT_LE(p, prev);
    prev = p;
  }
}
