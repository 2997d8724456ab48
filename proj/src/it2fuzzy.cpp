#include "fmorrap/it2fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fmorrap/error.hpp"

namespace fmorrap {

namespace {

std::string describe_order(const char* lhs, double a, const char* rhs, double b) {
  std::ostringstream os;
  os.precision(17);
  os << lhs << " (" << a << ") must not exceed " << rhs << " (" << b << ")";
  return os.str();
}

void require_order(const char* lhs, double a, const char* rhs, double b, const char* where) {
  if (!(a <= b)) fail(ErrorKind::invalid_argument, std::string(where) + ": " + describe_order(lhs, a, rhs, b));
}

void require_finite(double v, const char* name, const char* where) {
  if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, std::string(where) + ": " + name + " is not finite");
}

void require_draw(double u, const char* where) {
  if (!(u >= 0.0 && u <= 1.0)) fail(ErrorKind::invalid_argument, std::string(where) + ": draw outside [0, 1]");
}

template <class Op>
SampledIt2 pointwise(const SampledIt2& a, const SampledIt2& b, Op op, const char* where) {
  if (!a.same_grid(b)) fail(ErrorKind::invalid_argument, std::string(where) + ": grids differ");
  const std::size_t n = a.size();
  std::vector<double> lower(n), upper(n);
  for (std::size_t i = 0; i < n; ++i) {
    lower[i] = op(a.lower()[i], b.lower()[i]);
    upper[i] = op(a.upper()[i], b.upper()[i]);
  }
  return SampledIt2({a.grid().begin(), a.grid().end()}, std::move(lower), std::move(upper));
}

}  // namespace

It2Tri It2Tri::create(double peak, double lmf_left, double lmf_right, double umf_left,
                      double umf_right) {
  constexpr const char* where = "It2Tri";
  for (auto [v, name] : {std::pair{peak, "peak"}, {lmf_left, "lmf_left"}, {lmf_right, "lmf_right"},
                         {umf_left, "umf_left"}, {umf_right, "umf_right"}}) {
    require_finite(v, name, where);
  }
  require_order("umf_left", umf_left, "lmf_left", lmf_left, where);
  require_order("lmf_left", lmf_left, "peak", peak, where);
  require_order("peak", peak, "lmf_right", lmf_right, where);
  require_order("lmf_right", lmf_right, "umf_right", umf_right, where);
  return It2Tri(peak, lmf_left, lmf_right, umf_left, umf_right);
}

It2Tri It2Tri::type1(double left, double peak, double right) {
  return create(peak, left, right, left, right);
}

double triangle_membership(double x, double left, double peak, double right) {
  if (x == peak) return 1.0;
  if (x < peak) {
    if (x <= left) return 0.0;
    return (x - left) / (peak - left);
  }
  if (x >= right) return 0.0;
  return (right - x) / (right - peak);
}

Membership eval_membership(const It2Tri& mf, double x) {
  const double lower = triangle_membership(x, mf.lmf_left(), mf.peak(), mf.lmf_right());
  const double upper = triangle_membership(x, mf.umf_left(), mf.peak(), mf.umf_right());
  // Nested bases give lower <= upper analytically; rounding may not.
  return {std::min(lower, upper), upper};
}

It2Tri generate_it2_tmf(double peak, double left_end, double right_end, Support support,
                        const SpreadDraws& draws) {
  constexpr const char* where = "generate_it2_tmf";
  require_order("support.lo", support.lo, "left_end", left_end, where);
  require_order("left_end", left_end, "peak", peak, where);
  require_order("peak", peak, "right_end", right_end, where);
  require_order("right_end", right_end, "support.hi", support.hi, where);
  for (double u : draws) require_draw(u, where);

  const auto [u1, u2, u3, u4] = draws;
  double lmf_left = left_end + (peak - left_end) * u1;
  double umf_left = left_end - (left_end - support.lo) * u2;
  double lmf_right = right_end - (right_end - peak) * u3;
  double umf_right = right_end + (support.hi - right_end) * u4;
  // Keep the nesting exact under rounding.
  lmf_left = std::clamp(lmf_left, left_end, peak);
  umf_left = std::clamp(umf_left, support.lo, left_end);
  lmf_right = std::clamp(lmf_right, peak, right_end);
  umf_right = std::clamp(umf_right, right_end, support.hi);
  return It2Tri::create(peak, lmf_left, lmf_right, umf_left, umf_right);
}

It2Tri generate_it2_tmf(double peak, double left_end, double right_end, Support support,
                        RandomStream& rng) {
  SpreadDraws draws{};
  for (double& u : draws) u = rng.uniform();
  return generate_it2_tmf(peak, left_end, right_end, support, draws);
}

SampledIt2::SampledIt2(std::vector<double> grid, std::vector<double> lower,
                       std::vector<double> upper)
    : grid_(std::move(grid)), lower_(std::move(lower)), upper_(std::move(upper)) {
  constexpr const char* where = "SampledIt2";
  if (grid_.size() < 2) fail(ErrorKind::invalid_argument, "SampledIt2: grid needs at least 2 points");
  if (lower_.size() != grid_.size() || upper_.size() != grid_.size()) {
    fail(ErrorKind::invalid_argument, "SampledIt2: grid, lower and upper lengths differ");
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    require_finite(grid_[i], "grid point", where);
    if (i > 0 && !(grid_[i - 1] < grid_[i])) {
      fail(ErrorKind::invalid_argument, "SampledIt2: grid is not strictly increasing at index " + std::to_string(i));
    }
    if (!(0.0 <= lower_[i] && lower_[i] <= upper_[i] && upper_[i] <= 1.0)) {
      fail(ErrorKind::invalid_argument,
           "SampledIt2: FOU containment 0 <= lower <= upper <= 1 violated at index " + std::to_string(i));
    }
  }
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  require(n >= 2, "uniform_grid: need at least 2 points");
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform_grid: need finite lo < hi");
  std::vector<double> grid(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + step * static_cast<double>(i);
  grid.back() = hi;
  return grid;
}

SampledIt2 discretize(const It2Tri& mf, std::span<const double> grid) {
  require(grid.size() >= 2, "discretize: grid needs at least 2 points");
  if (grid.front() > mf.umf_left() || grid.back() < mf.umf_right()) {
    fail(ErrorKind::invalid_argument, "discretize: grid does not cover the UMF support; mass would be truncated");
  }
  std::vector<double> lower(grid.size()), upper(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Membership m = eval_membership(mf, grid[i]);
    lower[i] = m.lower;
    upper[i] = m.upper;
  }
  if (mf.is_point_mass()) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), mf.peak());
    std::size_t k = static_cast<std::size_t>(it - grid.begin());
    if (k == grid.size()) {
      k = grid.size() - 1;
    } else if (k > 0 && mf.peak() - grid[k - 1] <= grid[k] - mf.peak()) {
      k = k - 1;
    }
    lower[k] = upper[k] = 1.0;
  }
  return SampledIt2({grid.begin(), grid.end()}, std::move(lower), std::move(upper));
}

SampledIt2 full_membership(std::span<const double> grid) {
  return SampledIt2({grid.begin(), grid.end()}, std::vector<double>(grid.size(), 1.0),
                    std::vector<double>(grid.size(), 1.0));
}

SampledIt2 zero_membership(std::span<const double> grid) {
  return SampledIt2({grid.begin(), grid.end()}, std::vector<double>(grid.size(), 0.0),
                    std::vector<double>(grid.size(), 0.0));
}

SampledIt2 meet(const SampledIt2& a, const SampledIt2& b) {
  return pointwise(a, b, [](double x, double y) { return std::min(x, y); }, "meet");
}

SampledIt2 join(const SampledIt2& a, const SampledIt2& b) {
  return pointwise(a, b, [](double x, double y) { return std::max(x, y); }, "join");
}

SampledIt2 negate(const SampledIt2& a) {
  const std::size_t n = a.size();
  std::vector<double> lower(n), upper(n);
  for (std::size_t i = 0; i < n; ++i) {
    lower[i] = 1.0 - a.upper()[i];
    upper[i] = 1.0 - a.lower()[i];
  }
  return SampledIt2({a.grid().begin(), a.grid().end()}, std::move(lower), std::move(upper));
}

}  // namespace fmorrap
