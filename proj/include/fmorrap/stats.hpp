#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fmorrap {

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> sd;  // sample sd, n - 1 denominator; unset for n == 1
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Throws Error(invalid_argument) on an empty sample.
SampleSummary describe(std::span<const double> samples);

/// Sample standard deviation. Throws Error(degenerate) for n < 2.
double sample_sd(std::span<const double> samples);

enum class TTestKind { pooled, welch };

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

/// Two-sample t-test. Each sample needs n >= 2. A zero variance estimate
/// throws Error(degenerate) unless the means are equal, in which case the
/// samples are indistinguishable and t = 0, p = 1.
TTestResult t_test(std::span<const double> a, std::span<const double> b, TTestKind kind = TTestKind::pooled);

struct AnovaResult {
  double f = 0.0;
  double df_between = 0.0;
  double df_within = 0.0;
  double p = 1.0;
};

/// One-way ANOVA. Needs >= 2 groups of n >= 2. Zero within-group variance
/// follows the same rule as t_test.
AnovaResult anova_f(std::span<const std::vector<double>> groups);

/// Two-sided Student t tail probability P(|T_df| >= |t|).
double student_two_sided_p(double t, double df);
/// Upper tail P(F_{d1,d2} >= f).
double f_upper_p(double f, double d1, double d2);

}  // namespace fmorrap
