#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmorrap/random.hpp"
#include "fmorrap/sysmodel.hpp"

namespace fmorrap {

struct SearchSpace {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const { return lower.size(); }
  void validate() const;
};

/// Result of evaluating one position. `raw` is only meaningful when the point
/// is feasible (violation == 0); `objectives` carries problem-specific
/// by-products reported alongside the best point.
struct Evaluation {
  double raw = 0.0;
  double violation = 0.0;
  std::array<double, 2> objectives{};

  bool feasible() const { return violation <= 0.0; }
};

/// Evaluates a position with a stream owned by that evaluation. Must be a
/// pure function of its arguments.
using Objective = std::function<Evaluation(std::span<const double> position, RandomStream& rng)>;

struct SwarmConfig {
  std::size_t population = 100;
  std::size_t iterations = 100;
  double c1 = 1.5;
  double c2 = 1.5;
  std::optional<double> k;  // unset: drawn uniformly once per run
  double velocity_clamp = 0.2;  // fraction of each variable's range
  std::uint64_t seed = 1;

  void validate() const;
};

struct GaConfig {
  std::size_t population = 100;
  std::size_t generations = 100;
  double crossover = 0.6;
  double mutation = 0.4;
  std::size_t tournament = 2;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_score = -std::numeric_limits<double>::infinity();
};

struct Swarm {
  std::vector<Particle> particles;
  std::vector<double> gbest_position;
  double gbest_score = -std::numeric_limits<double>::infinity();
  double k = 0.0;
  std::vector<double> velocity_limit;  // per dimension
};

/// Constriction factor. For phi = c1*u1 + c2*u2 >= 4 this is
/// 2k / |2 - phi - sqrt(phi^2 - 4 phi)|. Below 4 the root is imaginary and
/// |2 - phi - i sqrt(4 phi - phi^2)| = 2 exactly, so the factor is k.
double constriction(double k, double c1, double c2, double u1, double u2);

/// Positions uniform in the box, velocities uniform in +-limit, personal
/// bests at the start positions. Scores start at -inf; the first
/// update_bests call seeds pbest and gbest from the initial evaluation.
Swarm init_swarm(const SearchSpace& space, const SwarmConfig& config, RandomStream& rng);

/// Strict improvements only: ties keep the incumbent.
void update_bests(Swarm& swarm, std::span<const double> scores);

/// One velocity/position step for a single particle with given factors.
void move_particle(Particle& p, std::span<const double> gbest, double chi, double phi1, double phi2,
                   const SearchSpace& space, std::span<const double> velocity_limit);

/// Draws u1, u2 per particle (shared across its dimensions) and moves it.
void move_particles(Swarm& swarm, const SwarmConfig& config, const SearchSpace& space, RandomStream& rng);

/// Scores evaluations with the worst-feasible penalty rule, in the order
/// they are presented.
class PenaltyScorer {
 public:
  double score(const Evaluation& e);
  std::optional<double> worst_feasible() const { return worst_feasible_; }

 private:
  std::optional<double> worst_feasible_;
};

struct SearchOutcome {
  std::vector<double> position;  // best feasible visited, else least violating
  Evaluation evaluation;
  bool feasible = false;
  std::vector<double> trace;  // best penalized score after each iteration
  double k = 0.0;             // PSO only
  std::size_t evaluations = 0;
};

SearchOutcome run_pso(const SearchSpace& space, const Objective& objective, const SwarmConfig& config);
SearchOutcome run_ga(const SearchSpace& space, const Objective& objective, const GaConfig& config);

// --- reliability-redundancy problem --------------------------------------------

struct Problem {
  SystemSpec spec;
  IdealBounds bounds;
  FitnessConfig fitness;
  MetricOptions metrics;
};

/// Reliabilities span [r_lo, r_hi]; redundancy dimensions span
/// [n_lo - 0.5, n_hi + 0.5] so every integer decodes with equal width.
SearchSpace search_space(const SystemSpec& spec);

/// Rounds the redundancy coordinates half-up and clamps them to the range.
Candidate decode(const SystemSpec& spec, std::span<const double> position);

Objective make_objective(const Problem& problem);

struct RunEcho {
  std::string algorithm;  // "pso" or "ga"
  std::size_t population = 0;
  std::size_t iterations = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::optional<double> k_fixed;
  double velocity_clamp = 0.0;
  double crossover = 0.0;
  double mutation = 0.0;
  std::size_t tournament = 0;
  std::size_t grid_size = 0;
  WeightFormula weight_formula = WeightFormula::dataset_consistent;
  VolumeFormula volume_formula = VolumeFormula::dataset_consistent;
  FitnessMode fitness_mode = FitnessMode::normalized;
  Aggregation aggregation = Aggregation::extension;
};

struct RunResult {
  WeightVector weights;
  std::uint64_t seed = 0;
  RunEcho echo;
  Candidate best;
  MetricSet metrics;       // crisp
  FitnessValue objectives;  // defuzzified y_r, y_c and raw fitness of `best`
  bool feasible = false;
  double violation = 0.0;
  double k = 0.0;
  std::vector<double> trace;
};

RunResult pso_solve(const Problem& problem, const SwarmConfig& config);
RunResult ga_solve(const Problem& problem, const GaConfig& config);

}  // namespace fmorrap
