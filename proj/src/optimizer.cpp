#include "fmorrap/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "fmorrap/error.hpp"

namespace fmorrap {

namespace {

// Best feasible point by raw fitness, and the least violating point as the
// fallback when nothing feasible is ever visited. First seen wins ties.
class BestTracker {
 public:
  void offer(std::span<const double> position, const Evaluation& e) {
    if (e.feasible()) {
      if (!has_feasible_ || e.raw > feasible_.raw) {
        has_feasible_ = true;
        feasible_ = e;
        feasible_pos_.assign(position.begin(), position.end());
      }
    } else if (!has_infeasible_ || e.violation < infeasible_.violation) {
      has_infeasible_ = true;
      infeasible_ = e;
      infeasible_pos_.assign(position.begin(), position.end());
    }
  }

  void fill(SearchOutcome& out) const {
    out.feasible = has_feasible_;
    if (has_feasible_) {
      out.position = feasible_pos_;
      out.evaluation = feasible_;
    } else {
      out.position = infeasible_pos_;
      out.evaluation = infeasible_;
    }
  }

 private:
  bool has_feasible_ = false;
  bool has_infeasible_ = false;
  Evaluation feasible_;
  Evaluation infeasible_;
  std::vector<double> feasible_pos_;
  std::vector<double> infeasible_pos_;
};

// Each evaluation owns a stream keyed by (seed, iteration, index) so the
// batch could be evaluated in any order with identical results.
std::vector<double> evaluate_batch(const Objective& objective, std::span<const std::vector<double>> positions,
                                   std::uint64_t seed, std::uint64_t iteration, PenaltyScorer& scorer,
                                   BestTracker& tracker, std::size_t first_index = 0) {
  std::vector<Evaluation> evals(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    RandomStream rng = RandomStream::derive(seed, iteration, first_index + i);
    evals[i] = objective(positions[i], rng);
  }
  std::vector<double> scores(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    scores[i] = scorer.score(evals[i]);
    tracker.offer(positions[i], evals[i]);
  }
  return scores;
}

std::vector<double> velocity_limits(const SearchSpace& space, double fraction) {
  std::vector<double> limit(space.dim());
  for (std::size_t d = 0; d < space.dim(); ++d) limit[d] = fraction * (space.upper[d] - space.lower[d]);
  return limit;
}

}  // namespace

void SearchSpace::validate() const {
  require(!lower.empty(), "SearchSpace: zero dimensions");
  require(lower.size() == upper.size(), "SearchSpace: bound lengths differ");
  for (std::size_t d = 0; d < lower.size(); ++d) {
    require(std::isfinite(lower[d]) && std::isfinite(upper[d]) && lower[d] <= upper[d],
            "SearchSpace: need finite lower <= upper in dimension " + std::to_string(d));
  }
}

void SwarmConfig::validate() const {
  require(population >= 2, "SwarmConfig: population must be >= 2");
  require(iterations >= 1, "SwarmConfig: iterations must be >= 1");
  require(c1 > 0.0 && c2 > 0.0, "SwarmConfig: c1 and c2 must be > 0");
  require(!k || (*k >= 0.0 && *k <= 1.0), "SwarmConfig: k must lie in [0, 1]");
  require(velocity_clamp >= 0.0 && std::isfinite(velocity_clamp), "SwarmConfig: velocity clamp must be >= 0");
}

void GaConfig::validate() const {
  require(population >= 2, "GaConfig: population must be >= 2");
  require(generations >= 1, "GaConfig: generations must be >= 1");
  require(crossover >= 0.0 && crossover <= 1.0, "GaConfig: crossover probability must lie in [0, 1]");
  require(mutation >= 0.0 && mutation <= 1.0, "GaConfig: mutation probability must lie in [0, 1]");
  require(tournament >= 1, "GaConfig: tournament size must be >= 1");
}

double constriction(double k, double c1, double c2, double u1, double u2) {
  const double phi = c1 * u1 + c2 * u2;
  if (phi < 4.0) return k;
  return 2.0 * k / std::abs(2.0 - phi - std::sqrt(phi * phi - 4.0 * phi));
}

Swarm init_swarm(const SearchSpace& space, const SwarmConfig& config, RandomStream& rng) {
  space.validate();
  require(config.population >= 1, "init_swarm: empty population");
  Swarm swarm;
  swarm.k = config.k ? *config.k : rng.uniform();
  swarm.velocity_limit = velocity_limits(space, config.velocity_clamp);
  swarm.particles.resize(config.population);
  const std::size_t dim = space.dim();
  for (Particle& p : swarm.particles) {
    p.position.resize(dim);
    p.velocity.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      p.position[d] = rng.uniform(space.lower[d], space.upper[d]);
      p.velocity[d] = rng.uniform(-swarm.velocity_limit[d], swarm.velocity_limit[d]);
    }
    p.best_position = p.position;
  }
  swarm.gbest_position = swarm.particles.front().position;
  return swarm;
}

void update_bests(Swarm& swarm, std::span<const double> scores) {
  require(scores.size() == swarm.particles.size(), "update_bests: one score per particle required");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    Particle& p = swarm.particles[i];
    if (scores[i] > p.best_score) {
      p.best_score = scores[i];
      p.best_position = p.position;
    }
  }
  for (const Particle& p : swarm.particles) {
    if (p.best_score > swarm.gbest_score) {
      swarm.gbest_score = p.best_score;
      swarm.gbest_position = p.best_position;
    }
  }
}

void move_particle(Particle& p, std::span<const double> gbest, double chi, double phi1, double phi2,
                   const SearchSpace& space, std::span<const double> velocity_limit) {
  for (std::size_t d = 0; d < p.position.size(); ++d) {
    const double x = p.position[d];
    double v = chi * (p.velocity[d] + phi1 * (p.best_position[d] - x) + phi2 * (gbest[d] - x));
    v = std::clamp(v, -velocity_limit[d], velocity_limit[d]);
    p.velocity[d] = v;
    p.position[d] = std::clamp(x + v, space.lower[d], space.upper[d]);
  }
}

void move_particles(Swarm& swarm, const SwarmConfig& config, const SearchSpace& space, RandomStream& rng) {
  for (Particle& p : swarm.particles) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double chi = constriction(swarm.k, config.c1, config.c2, u1, u2);
    move_particle(p, swarm.gbest_position, chi, config.c1 * u1, config.c2 * u2, space, swarm.velocity_limit);
  }
}

double PenaltyScorer::score(const Evaluation& e) {
  if (e.feasible()) {
    if (!worst_feasible_ || e.raw < *worst_feasible_) worst_feasible_ = e.raw;
    return e.raw;
  }
  return worst_feasible_.value_or(0.0) - e.violation;
}

SearchOutcome run_pso(const SearchSpace& space, const Objective& objective, const SwarmConfig& config) {
  config.validate();
  space.validate();
  RandomStream rng(config.seed);
  Swarm swarm = init_swarm(space, config, rng);

  PenaltyScorer scorer;
  BestTracker tracker;
  SearchOutcome out;
  out.k = swarm.k;
  out.trace.reserve(config.iterations);

  std::vector<std::vector<double>> positions(swarm.particles.size());
  for (std::size_t it = 0; it < config.iterations; ++it) {
    if (it > 0) move_particles(swarm, config, space, rng);
    for (std::size_t i = 0; i < swarm.particles.size(); ++i) positions[i] = swarm.particles[i].position;
    const std::vector<double> scores = evaluate_batch(objective, positions, config.seed, it, scorer, tracker);
    update_bests(swarm, scores);
    out.trace.push_back(swarm.gbest_score);
    out.evaluations += positions.size();
  }
  tracker.fill(out);
  return out;
}

SearchOutcome run_ga(const SearchSpace& space, const Objective& objective, const GaConfig& config) {
  config.validate();
  space.validate();
  RandomStream rng(config.seed);
  const std::size_t dim = space.dim();
  const std::size_t n = config.population;

  std::vector<std::vector<double>> pop(n, std::vector<double>(dim));
  for (auto& ind : pop) {
    for (std::size_t d = 0; d < dim; ++d) ind[d] = rng.uniform(space.lower[d], space.upper[d]);
  }

  PenaltyScorer scorer;
  BestTracker tracker;
  SearchOutcome out;
  out.trace.reserve(config.generations);

  std::vector<double> scores = evaluate_batch(objective, pop, config.seed, 0, scorer, tracker);
  out.evaluations += n;
  auto best_index = [&] {
    return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
  };
  out.trace.push_back(scores[best_index()]);

  auto tournament = [&] {
    std::size_t winner = rng.index(n);
    for (std::size_t t = 1; t < config.tournament; ++t) {
      const std::size_t challenger = rng.index(n);
      if (scores[challenger] > scores[winner]) winner = challenger;
    }
    return winner;
  };

  for (std::size_t gen = 1; gen < config.generations; ++gen) {
    const std::size_t elite = best_index();
    std::vector<std::vector<double>> offspring;
    offspring.reserve(n - 1);
    while (offspring.size() < n - 1) {
      std::vector<double> a = pop[tournament()];
      std::vector<double> b = pop[tournament()];
      if (dim > 1 && rng.uniform() < config.crossover) {
        const std::size_t cut = 1 + rng.index(dim - 1);
        std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(cut), a.end(),
                         b.begin() + static_cast<std::ptrdiff_t>(cut));
      }
      for (auto* child : {&a, &b}) {
        if (rng.uniform() < config.mutation) {
          const std::size_t j = rng.index(dim);
          (*child)[j] = rng.uniform(space.lower[j], space.upper[j]);
        }
      }
      offspring.push_back(std::move(a));
      if (offspring.size() < n - 1) offspring.push_back(std::move(b));
    }

    // The elite keeps its score; only offspring are evaluated.
    const std::vector<double> child_scores =
        evaluate_batch(objective, offspring, config.seed, gen, scorer, tracker, 1);
    out.evaluations += offspring.size();

    std::vector<std::vector<double>> next;
    next.reserve(n);
    std::vector<double> next_scores;
    next_scores.reserve(n);
    next.push_back(std::move(pop[elite]));
    next_scores.push_back(scores[elite]);
    for (std::size_t i = 0; i < offspring.size(); ++i) {
      next.push_back(std::move(offspring[i]));
      next_scores.push_back(child_scores[i]);
    }
    pop = std::move(next);
    scores = std::move(next_scores);
    out.trace.push_back(scores[best_index()]);
  }
  tracker.fill(out);
  return out;
}

// --- reliability-redundancy problem --------------------------------------------

SearchSpace search_space(const SystemSpec& spec) {
  const std::size_t m = spec.size();
  SearchSpace space;
  space.lower.resize(2 * m);
  space.upper.resize(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    space.lower[i] = spec.r_range.lo;
    space.upper[i] = spec.r_range.hi;
    space.lower[m + i] = spec.n_range.lo - 0.5;
    space.upper[m + i] = spec.n_range.hi + 0.5;
  }
  return space;
}

Candidate decode(const SystemSpec& spec, std::span<const double> position) {
  const std::size_t m = spec.size();
  require(position.size() == 2 * m, "decode: position length must be 2m");
  Candidate c;
  c.r.assign(position.begin(), position.begin() + static_cast<std::ptrdiff_t>(m));
  c.n.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    c.r[i] = std::clamp(c.r[i], spec.r_range.lo, spec.r_range.hi);
    const double rounded = std::floor(position[m + i] + 0.5);
    c.n[i] = static_cast<int>(std::clamp(rounded, double(spec.n_range.lo), double(spec.n_range.hi)));
  }
  return c;
}

Objective make_objective(const Problem& problem) {
  return [&problem](std::span<const double> position, RandomStream& rng) {
    const Candidate cand = decode(problem.spec, position);
    const MetricSet metrics = evaluate_metrics(problem.spec, cand, problem.metrics);
    Evaluation e;
    e.violation = constraint_violation(problem.spec, metrics);
    if (e.feasible()) {
      const FitnessValue v = scalarized_fitness(problem.spec, cand, problem.bounds, problem.fitness, rng);
      e.raw = v.fitness;
      e.objectives = {v.reliability, v.cost};
    }
    return e;
  };
}

namespace {

void check_problem(const Problem& problem) {
  problem.spec.validate();
  problem.bounds.validate();
  require(problem.fitness.grid_size >= 2, "Problem: grid size must be >= 2");
}

RunResult make_result(const Problem& problem, const SearchOutcome& out, RunEcho echo, std::uint64_t seed) {
  RunResult r;
  r.weights = problem.fitness.weights;
  r.seed = seed;
  echo.grid_size = problem.fitness.grid_size;
  echo.weight_formula = problem.metrics.weight;
  echo.volume_formula = problem.metrics.volume;
  echo.fitness_mode = problem.fitness.mode;
  echo.aggregation = problem.fitness.aggregation;
  r.echo = std::move(echo);
  r.best = decode(problem.spec, out.position);
  r.metrics = evaluate_metrics(problem.spec, r.best, problem.metrics);
  r.feasible = out.feasible;
  r.violation = out.evaluation.violation;
  r.objectives = {out.evaluation.raw, out.evaluation.objectives[0], out.evaluation.objectives[1]};
  r.k = out.k;
  r.trace = out.trace;
  return r;
}

}  // namespace

RunResult pso_solve(const Problem& problem, const SwarmConfig& config) {
  check_problem(problem);
  const SearchOutcome out = run_pso(search_space(problem.spec), make_objective(problem), config);
  RunEcho echo;
  echo.algorithm = "pso";
  echo.population = config.population;
  echo.iterations = config.iterations;
  echo.c1 = config.c1;
  echo.c2 = config.c2;
  echo.k_fixed = config.k;
  echo.velocity_clamp = config.velocity_clamp;
  return make_result(problem, out, std::move(echo), config.seed);
}

RunResult ga_solve(const Problem& problem, const GaConfig& config) {
  check_problem(problem);
  const SearchOutcome out = run_ga(search_space(problem.spec), make_objective(problem), config);
  RunEcho echo;
  echo.algorithm = "ga";
  echo.population = config.population;
  echo.iterations = config.generations;
  echo.crossover = config.crossover;
  echo.mutation = config.mutation;
  echo.tournament = config.tournament;
  return make_result(problem, out, std::move(echo), config.seed);
}

}  // namespace fmorrap
