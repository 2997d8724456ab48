#pragma once

#include <cstddef>

#include "fmorrap/it2fuzzy.hpp"

namespace fmorrap {

struct CentroidInterval {
  double left = 0.0;
  double right = 0.0;

  double midpoint() const { return 0.5 * (left + right); }
};

/// One end of the centroid together with the number of switch-point
/// iterations the EKM loop needed to converge.
struct EkmEnd {
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t switch_point = 0;  // count of leading points on the first bound
};

// Enhanced Karnik-Mendel type-reduction. The sampled set must carry positive
// upper-membership mass; otherwise Error(degenerate) is thrown.
EkmEnd ekm_left_detail(const SampledIt2& s);
EkmEnd ekm_right_detail(const SampledIt2& s);
double ekm_left(const SampledIt2& s);
double ekm_right(const SampledIt2& s);

CentroidInterval centroid_interval(const SampledIt2& s);

/// Midpoint of the centroid interval.
double defuzzify(const SampledIt2& s);

/// Exhaustive switch-point enumeration: evaluates the weighted average for
/// every single-switch embedded set and returns (min over left patterns,
/// max over right patterns). O(N^2); refuses N > 4096.
CentroidInterval brute_force_centroid(const SampledIt2& s);

}  // namespace fmorrap
