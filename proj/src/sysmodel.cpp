#include "fmorrap/sysmodel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "fmorrap/error.hpp"
#include "fmorrap/typereduce.hpp"

namespace fmorrap {

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

void require_shape(const SystemSpec& spec, const Candidate& cand, const char* where) {
  if (cand.r.size() != spec.size() || cand.n.size() != spec.size()) {
    fail(ErrorKind::invalid_argument, std::string(where) + ": candidate length does not match m = " +
                                          std::to_string(spec.size()));
  }
}

double hardware_factor(int n) { return n + std::exp(n / 4.0); }

// Structure function of the topology over sub-system reliabilities.
struct Structure {
  Topology topology;

  template <class Fn>
  double operator()(std::size_t m, Fn&& value_at) const {
    double prod = 1.0;
    if (topology == Topology::series_parallel) {
      for (std::size_t i = 0; i < m; ++i) prod *= value_at(i);
      return prod;
    }
    for (std::size_t i = 0; i < m; ++i) prod *= 1.0 - value_at(i);
    return 1.0 - prod;
  }
};

struct TriangleSide {
  double left;
  double peak;
  double right;
};

// Samples the extension of one bounding type-1 triangle per sub-system.
void extend_bound(std::span<const TriangleSide> tris, Structure phi, std::span<const double> grid,
                  std::vector<double>& out) {
  const std::size_t m = tris.size();
  auto left_level = [&](double a) {
    return phi(m, [&](std::size_t i) { return tris[i].left + a * (tris[i].peak - tris[i].left); });
  };
  auto right_level = [&](double a) {
    return phi(m, [&](std::size_t i) { return tris[i].right - a * (tris[i].right - tris[i].peak); });
  };
  const double peak = left_level(1.0);
  const double foot_left = left_level(0.0);
  const double foot_right = right_level(0.0);

  const boost::math::tools::eps_tolerance<double> tol(50);
  out.assign(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double y = grid[j];
    if (y == peak) {
      out[j] = 1.0;
    } else if (y < peak) {
      if (y <= foot_left) continue;
      std::uintmax_t iters = 100;
      auto f = [&](double a) { return left_level(a) - y; };
      const auto [a, b] = boost::math::tools::toms748_solve(f, 0.0, 1.0, foot_left - y, peak - y, tol, iters);
      out[j] = std::clamp(0.5 * (a + b), 0.0, 1.0);
    } else {
      if (y >= foot_right) continue;
      std::uintmax_t iters = 100;
      auto f = [&](double a) { return right_level(a) - y; };
      const auto [a, b] = boost::math::tools::toms748_solve(f, 0.0, 1.0, foot_right - y, peak - y, tol, iters);
      out[j] = std::clamp(0.5 * (a + b), 0.0, 1.0);
    }
  }
}

std::size_t nearest_node(std::span<const double> grid, double x) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), x);
  std::size_t k = static_cast<std::size_t>(it - grid.begin());
  if (k == grid.size()) return grid.size() - 1;
  if (k > 0 && x - grid[k - 1] <= grid[k] - x) return k - 1;
  return k;
}

}  // namespace

void SystemSpec::validate() const {
  require(!subsystems.empty(), "SystemSpec: need at least one sub-system");
  for (std::size_t i = 0; i < subsystems.size(); ++i) {
    const Subsystem& s = subsystems[i];
    const std::string at = "SystemSpec: sub-system " + std::to_string(i + 1) + ": ";
    require(positive(s.alpha), at + "alpha must be > 0");
    require(positive(s.beta), at + "beta must be > 0");
    require(positive(s.weight), at + "weight must be > 0");
    require(positive(s.kappa), at + "kappa must be > 0");
    require(positive(s.wv2), at + "wv2 must be > 0");
  }
  require(positive(mission_time), "SystemSpec: mission time must be > 0");
  require(positive(limits.weight) && positive(limits.volume) && positive(limits.cost),
          "SystemSpec: limits must be > 0");
  require(0.0 < r_range.lo && r_range.lo < r_range.hi && r_range.hi < 1.0,
          "SystemSpec: r range must satisfy 0 < r_lo < r_hi < 1");
  require(1 <= n_range.lo && n_range.lo <= n_range.hi, "SystemSpec: n range must satisfy 1 <= n_lo <= n_hi");
}

void IdealBounds::validate() const {
  require(0.0 <= r_left && r_left < r_right && r_right <= 1.0,
          "IdealBounds: need 0 <= r_left < r_right <= 1");
  require(std::isfinite(c_left) && std::isfinite(c_right) && 0.0 <= c_left && c_left < c_right,
          "IdealBounds: need 0 <= c_left < c_right");
}

void validate_candidate(const SystemSpec& spec, const Candidate& cand) {
  require_shape(spec, cand, "validate_candidate");
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const std::string at = "candidate sub-system " + std::to_string(i + 1) + ": ";
    require(cand.r[i] >= spec.r_range.lo && cand.r[i] <= spec.r_range.hi, at + "r outside the allowed range");
    require(cand.n[i] >= spec.n_range.lo && cand.n[i] <= spec.n_range.hi, at + "n outside the allowed range");
  }
}

double subsystem_reliability(Topology topology, double r, int n) {
  require(r >= 0.0 && r <= 1.0, "subsystem_reliability: r must lie in [0, 1]");
  require(n >= 1, "subsystem_reliability: n must be >= 1");
  if (topology == Topology::series_parallel) return 1.0 - std::pow(1.0 - r, n);
  return std::pow(r, n);
}

double system_reliability(const SystemSpec& spec, const Candidate& cand) {
  require_shape(spec, cand, "system_reliability");
  const Structure phi{spec.topology};
  return phi(spec.size(), [&](std::size_t i) { return subsystem_reliability(spec.topology, cand.r[i], cand.n[i]); });
}

double subsystem_cost(const SystemSpec& spec, std::size_t i, double r, int n) {
  require(i < spec.size(), "subsystem_cost: index out of range");
  if (!(r > 0.0)) fail(ErrorKind::invalid_argument, "subsystem_cost: r must be > 0");
  if (!(r < 1.0)) fail(ErrorKind::invalid_argument, "subsystem_cost: r = 1 makes the cost law singular");
  require(n >= 1, "subsystem_cost: n must be >= 1");
  const Subsystem& s = spec.subsystems[i];
  return s.alpha * std::pow(-spec.mission_time / std::log(r), s.beta) * hardware_factor(n);
}

double system_cost(const SystemSpec& spec, const Candidate& cand) {
  require_shape(spec, cand, "system_cost");
  double total = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) total += subsystem_cost(spec, i, cand.r[i], cand.n[i]);
  return total;
}

double system_weight(const SystemSpec& spec, const Candidate& cand, WeightFormula formula) {
  require_shape(spec, cand, "system_weight");
  double total = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double w = spec.subsystems[i].weight;
    const int n = cand.n[i];
    switch (formula) {
      case WeightFormula::dataset_consistent: total += w * n * std::exp(n / 4.0); break;
      case WeightFormula::as_written: total += w * hardware_factor(n); break;
      default: fail(ErrorKind::invalid_argument, "system_weight: unknown formula");
    }
  }
  return total;
}

double system_volume(const SystemSpec& spec, const Candidate& cand, VolumeFormula formula) {
  require_shape(spec, cand, "system_volume");
  double total = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Subsystem& s = spec.subsystems[i];
    const double coeff = formula == VolumeFormula::as_written ? s.wv2 : s.kappa;
    total += coeff * cand.n[i] * cand.n[i];
  }
  return total;
}

MetricSet evaluate_metrics(const SystemSpec& spec, const Candidate& cand, MetricOptions options) {
  return {system_reliability(spec, cand), system_cost(spec, cand),
          system_weight(spec, cand, options.weight), system_volume(spec, cand, options.volume)};
}

double constraint_violation(const SystemSpec& spec, const MetricSet& metrics) {
  return std::max(0.0, metrics.weight - spec.limits.weight) + std::max(0.0, metrics.volume - spec.limits.volume);
}

bool is_feasible(const SystemSpec& spec, const MetricSet& metrics) {
  return metrics.weight <= spec.limits.weight && metrics.volume <= spec.limits.volume;
}

FuzzyObjectives fuzzify_objectives(const SystemSpec& spec, const Candidate& cand,
                                   const IdealBounds& bounds, RandomStream& rng, FuzzySpread spread) {
  require_shape(spec, cand, "fuzzify_objectives");
  const std::size_t m = spec.size();
  std::vector<double> rel_peak(m), cost_peak(m);
  double cost_hi = spec.limits.cost;
  for (std::size_t i = 0; i < m; ++i) {
    rel_peak[i] = subsystem_reliability(spec.topology, cand.r[i], cand.n[i]);
    cost_peak[i] = subsystem_cost(spec, i, cand.r[i], cand.n[i]);
    cost_hi = std::max({cost_hi, cost_peak[i], bounds.c_right});
  }

  FuzzyObjectives out;
  out.cost_support = {0.0, cost_hi};
  out.reliability.reserve(m);
  out.cost.reserve(m);
  const Support rel_support{0.0, 1.0};
  for (std::size_t i = 0; i < m; ++i) {
    if (spread == FuzzySpread::zero) {
      out.reliability.push_back(It2Tri::type1(rel_peak[i], rel_peak[i], rel_peak[i]));
      out.cost.push_back(It2Tri::type1(cost_peak[i], cost_peak[i], cost_peak[i]));
      continue;
    }
    out.reliability.push_back(generate_it2_tmf(rel_peak[i], std::min(bounds.r_left, rel_peak[i]),
                                               std::max(bounds.r_right, rel_peak[i]), rel_support, rng));
    out.cost.push_back(generate_it2_tmf(cost_peak[i], std::min(bounds.c_left, cost_peak[i]),
                                        std::max(bounds.c_right, cost_peak[i]), out.cost_support, rng));
  }
  return out;
}

SampledIt2 aggregate_system_reliability(std::span<const SampledIt2> mfs, Topology topology) {
  require(!mfs.empty(), "aggregate_system_reliability: no membership functions");
  if (topology == Topology::series_parallel) {
    SampledIt2 acc = mfs.front();
    for (std::size_t i = 1; i < mfs.size(); ++i) acc = meet(acc, mfs[i]);
    return acc;
  }
  SampledIt2 acc = negate(mfs.front());
  for (std::size_t i = 1; i < mfs.size(); ++i) acc = meet(acc, negate(mfs[i]));
  return negate(acc);
}

SampledIt2 aggregate_system_cost(std::span<const SampledIt2> mfs) {
  require(!mfs.empty(), "aggregate_system_cost: no membership functions");
  SampledIt2 acc = mfs.front();
  for (std::size_t i = 1; i < mfs.size(); ++i) acc = join(acc, mfs[i]);
  return acc;
}

SampledIt2 extend_system_reliability(std::span<const It2Tri> mfs, Topology topology,
                                     std::span<const double> grid) {
  require(!mfs.empty(), "extend_system_reliability: no membership functions");
  require(grid.size() >= 2, "extend_system_reliability: grid needs at least 2 points");
  for (const It2Tri& mf : mfs) {
    require(mf.umf_left() >= 0.0 && mf.umf_right() <= 1.0,
            "extend_system_reliability: reliability MFs must live on [0, 1]");
  }
  const Structure phi{topology};
  std::vector<TriangleSide> lmf, umf;
  lmf.reserve(mfs.size());
  umf.reserve(mfs.size());
  bool point_mass = true;
  for (const It2Tri& mf : mfs) {
    lmf.push_back({mf.lmf_left(), mf.peak(), mf.lmf_right()});
    umf.push_back({mf.umf_left(), mf.peak(), mf.umf_right()});
    point_mass = point_mass && mf.is_point_mass();
  }
  const double foot_lo = phi(mfs.size(), [&](std::size_t i) { return umf[i].left; });
  const double foot_hi = phi(mfs.size(), [&](std::size_t i) { return umf[i].right; });
  if (grid.front() > foot_lo || grid.back() < foot_hi) {
    fail(ErrorKind::invalid_argument, "extend_system_reliability: grid does not cover the output support");
  }

  std::vector<double> lower, upper;
  extend_bound(lmf, phi, grid, lower);
  extend_bound(umf, phi, grid, upper);
  for (std::size_t j = 0; j < grid.size(); ++j) lower[j] = std::min(lower[j], upper[j]);
  if (point_mass) {
    const double apex = phi(mfs.size(), [&](std::size_t i) { return mfs[i].peak(); });
    const std::size_t k = nearest_node(grid, apex);
    lower[k] = upper[k] = 1.0;
  }
  return SampledIt2({grid.begin(), grid.end()}, std::move(lower), std::move(upper));
}

FitnessValue scalarized_fitness(const SystemSpec& spec, const Candidate& cand,
                                const IdealBounds& bounds, const FitnessConfig& config,
                                RandomStream& rng) {
  require(config.weights.reliability >= 0.0 && config.weights.cost >= 0.0 &&
              (config.weights.reliability > 0.0 || config.weights.cost > 0.0),
          "scalarized_fitness: weights must be non-negative and not both zero");
  const FuzzyObjectives fz = fuzzify_objectives(spec, cand, bounds, rng, config.spread);

  const std::vector<double> rel_grid = uniform_grid(0.0, 1.0, config.grid_size);
  const std::vector<double> cost_grid = uniform_grid(fz.cost_support.lo, fz.cost_support.hi, config.grid_size);

  auto sample_all = [](std::span<const It2Tri> mfs, std::span<const double> grid) {
    std::vector<SampledIt2> out;
    out.reserve(mfs.size());
    for (const It2Tri& mf : mfs) out.push_back(discretize(mf, grid));
    return out;
  };

  FitnessValue v;
  try {
    const SampledIt2 rel = config.aggregation == Aggregation::extension
                               ? extend_system_reliability(fz.reliability, spec.topology, rel_grid)
                               : aggregate_system_reliability(sample_all(fz.reliability, rel_grid), spec.topology);
    const SampledIt2 cost = aggregate_system_cost(sample_all(fz.cost, cost_grid));
    v.reliability = defuzzify(rel);
    v.cost = defuzzify(cost);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate) throw;
    fail(ErrorKind::degenerate, std::string(e.what()) + " (candidate " + describe(cand) + ")");
  }

  const double cost_term = config.mode == FitnessMode::normalized
                               ? (v.cost - bounds.c_left) / (bounds.c_right - bounds.c_left)
                               : v.cost;
  v.fitness = config.weights.reliability * v.reliability - config.weights.cost * cost_term;
  return v;
}

double penalized_fitness(double raw_fitness, const MetricSet& metrics, const SystemSpec& spec,
                         std::optional<double> worst_feasible_so_far) {
  const double violation = constraint_violation(spec, metrics);
  if (violation <= 0.0) return raw_fitness;
  return worst_feasible_so_far.value_or(0.0) - violation;
}

bool dominates(const MetricSet& a, const MetricSet& b) {
  return a.reliability >= b.reliability && a.cost <= b.cost &&
         (a.reliability > b.reliability || a.cost < b.cost);
}

// --- names -------------------------------------------------------------------

namespace {

std::string normalize_tag(std::string_view s) {
  std::string out(s);
  std::replace(out.begin(), out.end(), '_', '-');
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

[[noreturn]] void unknown_tag(const char* what, std::string_view s) {
  fail(ErrorKind::invalid_argument, std::string("unknown ") + what + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(Topology t) {
  return t == Topology::series_parallel ? "series-parallel" : "parallel-series";
}
std::string_view to_string(WeightFormula f) {
  return f == WeightFormula::dataset_consistent ? "dataset-consistent" : "as-written";
}
std::string_view to_string(VolumeFormula f) {
  return f == VolumeFormula::dataset_consistent ? "dataset-consistent" : "as-written";
}
std::string_view to_string(FitnessMode m) { return m == FitnessMode::normalized ? "normalized" : "raw"; }
std::string_view to_string(Aggregation a) { return a == Aggregation::extension ? "extension" : "pointwise"; }
std::string_view to_string(FuzzySpread s) { return s == FuzzySpread::ideal_bounds ? "ideal-bounds" : "zero"; }

Topology parse_topology(std::string_view s) {
  const std::string t = normalize_tag(s);
  if (t == "series-parallel") return Topology::series_parallel;
  if (t == "parallel-series") return Topology::parallel_series;
  unknown_tag("topology", s);
}

WeightFormula parse_weight_formula(std::string_view s) {
  const std::string t = normalize_tag(s);
  if (t == "dataset-consistent") return WeightFormula::dataset_consistent;
  if (t == "as-written") return WeightFormula::as_written;
  unknown_tag("weight formula", s);
}

VolumeFormula parse_volume_formula(std::string_view s) {
  const std::string t = normalize_tag(s);
  if (t == "dataset-consistent") return VolumeFormula::dataset_consistent;
  if (t == "as-written") return VolumeFormula::as_written;
  unknown_tag("volume formula", s);
}

FitnessMode parse_fitness_mode(std::string_view s) {
  const std::string t = normalize_tag(s);
  if (t == "normalized") return FitnessMode::normalized;
  if (t == "raw") return FitnessMode::raw;
  unknown_tag("fitness mode", s);
}

Aggregation parse_aggregation(std::string_view s) {
  const std::string t = normalize_tag(s);
  if (t == "extension") return Aggregation::extension;
  if (t == "pointwise") return Aggregation::pointwise;
  unknown_tag("aggregation", s);
}

std::string describe(const Candidate& cand) {
  std::ostringstream os;
  os.precision(9);
  os << "r=(";
  for (std::size_t i = 0; i < cand.r.size(); ++i) os << (i ? "," : "") << cand.r[i];
  os << ") n=(";
  for (std::size_t i = 0; i < cand.n.size(); ++i) os << (i ? "," : "") << cand.n[i];
  os << ")";
  return os.str();
}

}  // namespace fmorrap
