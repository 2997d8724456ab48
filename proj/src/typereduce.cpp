#include "fmorrap/typereduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fmorrap/error.hpp"

namespace fmorrap {

namespace {

// k in [1, N-1] is the count of leading points on the "first" bound.
std::size_t initial_switch(std::size_t n, double divisor) {
  const auto k = static_cast<std::size_t>(std::floor(static_cast<double>(n) / divisor + 0.5));
  return std::clamp<std::size_t>(k, 1, n - 1);
}

// Switch point for centroid c, clamped to [1, N-1]. A grid point equal to c
// leaves c unchanged whichever weight it takes, so ties always take the
// upper weight: the left end counts points <= c, the right end points < c.
std::size_t locate_switch(std::span<const double> x, double c, bool left) {
  const auto it = left ? std::upper_bound(x.begin(), x.end(), c) : std::lower_bound(x.begin(), x.end(), c);
  return std::clamp<std::size_t>(static_cast<std::size_t>(it - x.begin()), 1, x.size() - 1);
}

double require_mass(const SampledIt2& s, const char* where) {
  const auto up = s.upper();
  const double mass = std::accumulate(up.begin(), up.end(), 0.0);
  if (!(mass > 0.0)) {
    fail(ErrorKind::degenerate, std::string(where) + ": zero upper-membership mass, centroid undefined");
  }
  return mass;
}

constexpr double kMassFloor = 1e-12;

struct Sums {
  double a = 0.0;
  double b = 0.0;
};

// Weighted sums with `head` weights on the first k points, `tail` after.
Sums pattern_sums(std::span<const double> x, std::span<const double> head,
                  std::span<const double> tail, std::size_t k) {
  Sums s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = i < k ? head[i] : tail[i];
    s.a += x[i] * w;
    s.b += w;
  }
  return s;
}

// Shared EKM loop. `sign` is +1 for the left end (switching a point from
// lower to upper adds mass), -1 for the right end.
// Each step moves c strictly toward its end. A step that fails to do so, or
// that would leave the pattern without mass, only reflects rounding.
EkmEnd ekm_iterate(const SampledIt2& s, std::size_t k, Sums sums, double sign, double total_mass) {
  const auto x = s.grid();
  const auto lo = s.lower();
  const auto up = s.upper();
  const std::size_t n = s.size();

  double c = sums.a / sums.b;
  for (std::size_t iter = 1; iter <= n; ++iter) {
    const std::size_t k_next = locate_switch(x, c, sign > 0.0);
    if (k_next == k) return {c, iter, k};
    const double s_dir = k_next > k ? 1.0 : -1.0;
    double da = 0.0, db = 0.0;
    for (std::size_t i = std::min(k, k_next); i < std::max(k, k_next); ++i) {
      const double gap = up[i] - lo[i];
      da += x[i] * gap;
      db += gap;
    }
    const Sums next{sums.a + sign * s_dir * da, sums.b + sign * s_dir * db};
    if (!(next.b > kMassFloor * total_mass)) return {c, iter, k};
    const double c_next = next.a / next.b;
    if (!(sign * (c - c_next) > 0.0)) return {c, iter, k};
    sums = next;
    c = c_next;
    k = k_next;
  }
  fail(ErrorKind::internal, "EKM did not converge within N iterations");
}

}  // namespace

EkmEnd ekm_left_detail(const SampledIt2& s) {
  const double mass = require_mass(s, "ekm_left");
  const auto x = s.grid();
  const auto lo = s.lower();
  const auto up = s.upper();
  const std::size_t n = s.size();

  std::size_t k = initial_switch(n, 2.4);
  Sums sums = pattern_sums(x, up, lo, k);
  if (!(sums.b > 0.0)) {
    // No mass in the starting pattern: upper is zero before k and lower is
    // zero from k on. Start just past the first point carrying upper mass.
    const auto first = static_cast<std::size_t>(
        std::find_if(up.begin(), up.end(), [](double v) { return v > 0.0; }) - up.begin());
    if (first == n - 1) return {x[first], 0, n - 1};
    k = first + 1;
    sums = pattern_sums(x, up, lo, k);
  }
  return ekm_iterate(s, k, sums, +1.0, mass);
}

EkmEnd ekm_right_detail(const SampledIt2& s) {
  const double mass = require_mass(s, "ekm_right");
  const auto x = s.grid();
  const auto lo = s.lower();
  const auto up = s.upper();
  const std::size_t n = s.size();

  std::size_t k = initial_switch(n, 1.7);
  Sums sums = pattern_sums(x, lo, up, k);
  if (!(sums.b > 0.0)) {
    // Mirror case: end the lower run at the last point carrying upper mass.
    std::size_t last = n - 1;
    while (!(up[last] > 0.0)) --last;
    if (last == 0) return {x[0], 0, 1};
    k = last;
    sums = pattern_sums(x, lo, up, k);
  }
  return ekm_iterate(s, k, sums, -1.0, mass);
}

double ekm_left(const SampledIt2& s) { return ekm_left_detail(s).value; }
double ekm_right(const SampledIt2& s) { return ekm_right_detail(s).value; }

CentroidInterval centroid_interval(const SampledIt2& s) {
  CentroidInterval c{ekm_left(s), ekm_right(s)};
  // Both ends are the same weighted average when the FOU has no width;
  // incremental updates can leave them a rounding error apart.
  if (c.left > c.right) c.left = c.right = 0.5 * (c.left + c.right);
  return c;
}

double defuzzify(const SampledIt2& s) { return centroid_interval(s).midpoint(); }

CentroidInterval brute_force_centroid(const SampledIt2& s) {
  const std::size_t n = s.size();
  require(n <= 4096, "brute_force_centroid: N too large to enumerate");
  const auto x = s.grid();
  const auto lo = s.lower();
  const auto up = s.upper();

  double best_left = std::numeric_limits<double>::infinity();
  double best_right = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t sw = 0; sw <= n; ++sw) {
    double num_l = 0.0, den_l = 0.0, num_r = 0.0, den_r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double wl = i < sw ? up[i] : lo[i];
      const double wr = i < sw ? lo[i] : up[i];
      num_l += x[i] * wl;
      den_l += wl;
      num_r += x[i] * wr;
      den_r += wr;
    }
    if (den_l > 0.0) {
      best_left = std::min(best_left, num_l / den_l);
      any = true;
    }
    if (den_r > 0.0) {
      best_right = std::max(best_right, num_r / den_r);
      any = true;
    }
  }
  if (!any) fail(ErrorKind::degenerate, "brute_force_centroid: every switch pattern is massless");
  return {best_left, best_right};
}

}  // namespace fmorrap
