#include "fmorrap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>

#include "fmorrap/error.hpp"

namespace fmorrap {

namespace {

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sum_sq_dev(std::span<const double> x, double mean) {
  double s = 0.0;
  for (double v : x) s += (v - mean) * (v - mean);
  return s;
}

void require_finite(std::span<const double> x, const char* what) {
  for (double v : x) require(std::isfinite(v), std::string(what) + ": non-finite sample value");
}

}  // namespace

SampleSummary describe(std::span<const double> samples) {
  require(!samples.empty(), "describe: empty sample");
  require_finite(samples, "describe");
  SampleSummary s;
  s.n = samples.size();
  s.mean = mean_of(samples);
  if (s.n >= 2) s.sd = std::sqrt(sum_sq_dev(samples, s.mean) / static_cast<double>(s.n - 1));
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = s.n / 2;
  s.median = s.n % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

double sample_sd(std::span<const double> samples) {
  const SampleSummary s = describe(samples);
  if (!s.sd) fail(ErrorKind::degenerate, "sample_sd: need at least 2 samples");
  return *s.sd;
}

double student_two_sided_p(double t, double df) {
  require(df > 0.0, "student_two_sided_p: df must be > 0");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(boost::math::ibeta(0.5 * df, 0.5, x), 0.0, 1.0);
}

double f_upper_p(double f, double d1, double d2) {
  require(d1 > 0.0 && d2 > 0.0, "f_upper_p: degrees of freedom must be > 0");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double x = d1 * f / (d1 * f + d2);
  return std::clamp(boost::math::ibetac(0.5 * d1, 0.5 * d2, x), 0.0, 1.0);
}

TTestResult t_test(std::span<const double> a, std::span<const double> b, TTestKind kind) {
  require(a.size() >= 2 && b.size() >= 2, "t_test: each sample needs at least 2 values");
  require_finite(a, "t_test");
  require_finite(b, "t_test");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  const double va = sum_sq_dev(a, ma) / (na - 1.0);
  const double vb = sum_sq_dev(b, mb) / (nb - 1.0);

  TTestResult r;
  double se2 = 0.0;
  if (kind == TTestKind::pooled) {
    r.df = na + nb - 2.0;
    const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / r.df;
    se2 = pooled * (1.0 / na + 1.0 / nb);
  } else {
    const double qa = va / na;
    const double qb = vb / nb;
    se2 = qa + qb;
    r.df = se2 > 0.0 ? se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0)) : na + nb - 2.0;
  }
  if (!(se2 > 0.0)) {
    if (ma == mb) return {0.0, r.df, 1.0};
    fail(ErrorKind::degenerate, "t_test: degenerate samples (zero variance, different means)");
  }
  r.t = (ma - mb) / std::sqrt(se2);
  r.p = student_two_sided_p(r.t, r.df);
  return r;
}

AnovaResult anova_f(std::span<const std::vector<double>> groups) {
  require(groups.size() >= 2, "anova_f: need at least 2 groups");
  std::size_t total = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    require(g.size() >= 2, "anova_f: each group needs at least 2 values");
    require_finite(g, "anova_f");
    total += g.size();
    grand_sum += std::accumulate(g.begin(), g.end(), 0.0);
  }
  const double grand = grand_sum / static_cast<double>(total);
  double ss_between = 0.0;
  double ss_within = 0.0;
  bool means_equal = true;
  const double first_mean = mean_of(groups.front());
  for (const auto& g : groups) {
    const double m = mean_of(g);
    means_equal = means_equal && m == first_mean;
    ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    ss_within += sum_sq_dev(g, m);
  }
  AnovaResult r;
  r.df_between = static_cast<double>(groups.size() - 1);
  r.df_within = static_cast<double>(total - groups.size());
  if (!(ss_within > 0.0)) {
    if (means_equal) return {0.0, r.df_between, r.df_within, 1.0};
    fail(ErrorKind::degenerate, "anova_f: degenerate groups (zero within-group variance)");
  }
  r.f = (ss_between / r.df_between) / (ss_within / r.df_within);
  r.p = f_upper_p(r.f, r.df_between, r.df_within);
  return r;
}

}  // namespace fmorrap
