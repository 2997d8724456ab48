#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "fmorrap/random.hpp"

namespace fmorrap {

struct Membership {
  double lower = 0.0;
  double upper = 0.0;
};

struct Support {
  double lo = 0.0;
  double hi = 1.0;
};

/// Triangular interval type-2 membership function.
///
/// Lower (LMF) and upper (UMF) triangles share the apex `peak`, where both
/// reach membership 1. The LMF base is nested inside the UMF base:
///
///     umf_left <= lmf_left <= peak <= lmf_right <= umf_right
///
/// A side whose end coincides with the apex is a point-mass side: membership
/// is 1 at the apex and 0 everywhere else on that side.
class It2Tri {
 public:
  // Throws Error(invalid_argument) naming the violated ordering.
  static It2Tri create(double peak, double lmf_left, double lmf_right, double umf_left,
                       double umf_right);
  // Type-1 triangle: LMF == UMF.
  static It2Tri type1(double left, double peak, double right);

  double peak() const { return peak_; }
  double lmf_left() const { return lmf_left_; }
  double lmf_right() const { return lmf_right_; }
  double umf_left() const { return umf_left_; }
  double umf_right() const { return umf_right_; }

  bool is_point_mass() const { return umf_left_ == peak_ && umf_right_ == peak_; }

 private:
  It2Tri(double peak, double ll, double lr, double ul, double ur)
      : peak_(peak), lmf_left_(ll), lmf_right_(lr), umf_left_(ul), umf_right_(ur) {}

  double peak_;
  double lmf_left_;
  double lmf_right_;
  double umf_left_;
  double umf_right_;
};

/// Membership of a type-1 triangle (left, peak, right) at x.
double triangle_membership(double x, double left, double peak, double right);

Membership eval_membership(const It2Tri& mf, double x);

/// Draws consumed by generate_it2_tmf, in order: lmf_left, umf_left,
/// lmf_right, umf_right. Each in [0, 1].
using SpreadDraws = std::array<double, 4>;

/// Builds an IT2 triangle around `peak` whose LMF shrinks toward the apex and
/// whose UMF widens toward the support ends by the given fractions.
It2Tri generate_it2_tmf(double peak, double left_end, double right_end, Support support,
                        const SpreadDraws& draws);
It2Tri generate_it2_tmf(double peak, double left_end, double right_end, Support support,
                        RandomStream& rng);

/// Discretized IT2 membership function on a strictly increasing grid.
class SampledIt2 {
 public:
  SampledIt2(std::vector<double> grid, std::vector<double> lower, std::vector<double> upper);

  std::span<const double> grid() const { return grid_; }
  std::span<const double> lower() const { return lower_; }
  std::span<const double> upper() const { return upper_; }
  std::size_t size() const { return grid_.size(); }

  bool same_grid(const SampledIt2& other) const { return grid_ == other.grid_; }

  friend bool operator==(const SampledIt2&, const SampledIt2&) = default;

 private:
  std::vector<double> grid_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// N points evenly spaced over [lo, hi], endpoints exact.
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// Samples `mf` on `grid`. The grid must cover [umf_left, umf_right].
/// A point-mass MF whose apex falls between nodes becomes a unit spike at the
/// nearest node so that its mass survives discretization.
SampledIt2 discretize(const It2Tri& mf, std::span<const double> grid);

SampledIt2 full_membership(std::span<const double> grid);
SampledIt2 zero_membership(std::span<const double> grid);

// Pointwise set algebra. Binary operations require identical grids.
SampledIt2 meet(const SampledIt2& a, const SampledIt2& b);  // min t-norm
SampledIt2 join(const SampledIt2& a, const SampledIt2& b);  // max t-conorm
SampledIt2 negate(const SampledIt2& a);                     // 1 - mu, bounds swapped

}  // namespace fmorrap
