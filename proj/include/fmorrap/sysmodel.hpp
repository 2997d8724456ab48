#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fmorrap/it2fuzzy.hpp"
#include "fmorrap/random.hpp"

namespace fmorrap {

enum class Topology { series_parallel, parallel_series };

struct Subsystem {
  double alpha = 0.0;   // cost scale, absolute (not the 1e5-scaled table value)
  double beta = 0.0;    // cost exponent
  double weight = 0.0;  // per-component weight w_i
  double kappa = 0.0;   // volume coefficient used by the dataset-consistent volume
  double wv2 = 0.0;     // w_i * v_i^2, used by the as-written volume

  friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

struct Limits {
  double weight = 0.0;
  double volume = 0.0;
  double cost = 0.0;

  friend bool operator==(const Limits&, const Limits&) = default;
};

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const RealRange&, const RealRange&) = default;
};

struct IntRange {
  int lo = 1;
  int hi = 1;

  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct SystemSpec {
  Topology topology = Topology::series_parallel;
  std::vector<Subsystem> subsystems;
  double mission_time = 0.0;
  Limits limits;
  RealRange r_range;
  IntRange n_range;

  std::size_t size() const { return subsystems.size(); }
  // Throws Error(invalid_argument) on the first violated invariant.
  void validate() const;

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

/// Ideal left/right values of sub-system reliability and cost for one weight
/// vector; the ends of the fuzzy numbers built around each candidate.
struct IdealBounds {
  double r_left = 0.0;
  double r_right = 0.0;
  double c_left = 0.0;
  double c_right = 0.0;

  void validate() const;
  friend bool operator==(const IdealBounds&, const IdealBounds&) = default;
};

struct WeightVector {
  double reliability = 1.0;  // xi_1
  double cost = 1.0;         // xi_2

  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

struct Candidate {
  std::vector<double> r;
  std::vector<int> n;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Checks lengths and the spec's variable ranges.
void validate_candidate(const SystemSpec& spec, const Candidate& cand);

struct MetricSet {
  double reliability = 0.0;
  double cost = 0.0;
  double weight = 0.0;
  double volume = 0.0;
};

// The printed weight law, sum w (n + e^{n/4}), does not reproduce the
// published W_S columns; sum w n e^{n/4} does, to every printed digit.
enum class WeightFormula { dataset_consistent, as_written };
// dataset_consistent: sum kappa n^2; as_written: sum w v^2 n^2.
enum class VolumeFormula { dataset_consistent, as_written };

struct MetricOptions {
  WeightFormula weight = WeightFormula::dataset_consistent;
  VolumeFormula volume = VolumeFormula::dataset_consistent;
};

double subsystem_reliability(Topology topology, double r, int n);
double system_reliability(const SystemSpec& spec, const Candidate& cand);
/// i-th summand of the cost law. Requires 0 < r < 1.
double subsystem_cost(const SystemSpec& spec, std::size_t i, double r, int n);
double system_cost(const SystemSpec& spec, const Candidate& cand);
double system_weight(const SystemSpec& spec, const Candidate& cand, WeightFormula formula);
double system_volume(const SystemSpec& spec, const Candidate& cand,
                     VolumeFormula formula = VolumeFormula::dataset_consistent);
MetricSet evaluate_metrics(const SystemSpec& spec, const Candidate& cand, MetricOptions options = {});

/// Total weight and volume excess over the limits; 0 when feasible.
double constraint_violation(const SystemSpec& spec, const MetricSet& metrics);
bool is_feasible(const SystemSpec& spec, const MetricSet& metrics);

// --- fuzzification and aggregation -------------------------------------------

enum class FuzzySpread {
  ideal_bounds,  // ends from IdealBounds (clamped to the peak), random FOU
  zero,          // both ends at the peak, no draws: point masses
};

struct FuzzyObjectives {
  std::vector<It2Tri> reliability;
  std::vector<It2Tri> cost;
  Support cost_support;  // shared by every cost MF
};

/// One reliability and one cost IT2 triangle per sub-system. Draws are
/// consumed in sub-system order, reliability (4 draws) before cost (4 draws).
FuzzyObjectives fuzzify_objectives(const SystemSpec& spec, const Candidate& cand,
                                   const IdealBounds& bounds, RandomStream& rng,
                                   FuzzySpread spread = FuzzySpread::ideal_bounds);

/// Pointwise aggregation on a shared grid: meet for series-parallel,
/// 1 - meet(1 - mu_i) for parallel-series.
SampledIt2 aggregate_system_reliability(std::span<const SampledIt2> mfs, Topology topology);

/// Pointwise join of the sub-system cost MFs.
SampledIt2 aggregate_system_cost(std::span<const SampledIt2> mfs);

/// Sup-min extension of the structure function (product for series-parallel,
/// 1 - prod(1 - x_i) for parallel-series) applied separately to the LMFs and
/// the UMFs, sampled on `grid`. Both structure functions are increasing in
/// every argument, so each side of the output is found by solving a monotone
/// level equation per grid point. Zero-spread inputs collapse to a point mass
/// at the crisp system reliability.
SampledIt2 extend_system_reliability(std::span<const It2Tri> mfs, Topology topology,
                                     std::span<const double> grid);

// --- scalarized fitness ------------------------------------------------------

enum class FitnessMode { normalized, raw };
enum class Aggregation { extension, pointwise };

struct FitnessConfig {
  WeightVector weights;
  FitnessMode mode = FitnessMode::normalized;
  Aggregation aggregation = Aggregation::extension;
  FuzzySpread spread = FuzzySpread::ideal_bounds;
  std::size_t grid_size = 201;
};

struct FitnessValue {
  double fitness = 0.0;
  double reliability = 0.0;  // defuzzified system reliability y_r
  double cost = 0.0;         // defuzzified system cost y_c
};

/// Fuzzify, aggregate, type-reduce and defuzzify, then scalarize. Higher is
/// better. Normalized mode rescales y_c by the ideal cost interval.
FitnessValue scalarized_fitness(const SystemSpec& spec, const Candidate& cand,
                                const IdealBounds& bounds, const FitnessConfig& config,
                                RandomStream& rng);

/// Feasible: raw_fitness. Infeasible: (worst feasible so far, or 0) minus the
/// total constraint violation.
double penalized_fitness(double raw_fitness, const MetricSet& metrics, const SystemSpec& spec,
                         std::optional<double> worst_feasible_so_far);

/// Pareto dominance on (reliability up, cost down).
bool dominates(const MetricSet& a, const MetricSet& b);

// --- names -------------------------------------------------------------------

std::string_view to_string(Topology t);
std::string_view to_string(WeightFormula f);
std::string_view to_string(VolumeFormula f);
std::string_view to_string(FitnessMode m);
std::string_view to_string(Aggregation a);
std::string_view to_string(FuzzySpread s);

// Accept both '-' and '_' spellings. Unknown tags throw Error(invalid_argument).
Topology parse_topology(std::string_view s);
WeightFormula parse_weight_formula(std::string_view s);
VolumeFormula parse_volume_formula(std::string_view s);
FitnessMode parse_fitness_mode(std::string_view s);
Aggregation parse_aggregation(std::string_view s);

std::string describe(const Candidate& cand);

}  // namespace fmorrap
