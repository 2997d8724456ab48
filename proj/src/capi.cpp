#include "fmorrap/fmorrap.h"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <exception>
#include <new>
#include <string>
#include <thread>
#include <vector>

#include "fmorrap/dataset.hpp"
#include "fmorrap/error.hpp"
#include "fmorrap/optimizer.hpp"
#include "fmorrap/report.hpp"
#include "fmorrap/stats.hpp"

struct fmorrap_dataset {
  fmorrap::Dataset data;
};

struct fmorrap_run {
  fmorrap::RunResult result;
};

struct fmorrap_run_set {
  std::string algorithm;
  std::vector<fmorrap_run> runs;
};

namespace {

thread_local std::string g_last_error;

fmorrap_status to_status(fmorrap::ErrorKind kind) {
  switch (kind) {
    case fmorrap::ErrorKind::invalid_argument:
      return FMORRAP_E_INVALID_ARGUMENT;
    case fmorrap::ErrorKind::degenerate:
      return FMORRAP_E_DEGENERATE;
    case fmorrap::ErrorKind::parse:
      return FMORRAP_E_PARSE;
    case fmorrap::ErrorKind::io:
      return FMORRAP_E_IO;
    case fmorrap::ErrorKind::internal:
      return FMORRAP_E_INTERNAL;
  }
  return FMORRAP_E_INTERNAL;
}

template <typename F>
fmorrap_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return FMORRAP_OK;
  } catch (const fmorrap::Error& e) {
    g_last_error = e.what();
    return to_status(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FMORRAP_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FMORRAP_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FMORRAP_E_INTERNAL;
  }
}

void need(const void* p, const char* name) {
  fmorrap::require(p != nullptr, std::string(name) + " must not be null");
}

fmorrap::Problem make_problem(const fmorrap::Dataset& d, const fmorrap_solve_options& o, double xi1, double xi2) {
  fmorrap::Problem p;
  p.spec = d.spec;
  p.fitness.weights = {xi1, xi2};
  p.bounds = d.bounds_for(p.fitness.weights);
  p.fitness.mode = o.fitness == FMORRAP_FITNESS_RAW ? fmorrap::FitnessMode::raw : fmorrap::FitnessMode::normalized;
  p.fitness.aggregation =
      o.aggregation == FMORRAP_AGGREGATION_POINTWISE ? fmorrap::Aggregation::pointwise : fmorrap::Aggregation::extension;
  p.fitness.grid_size = o.grid_size;
  p.metrics.weight = o.weight_formula == FMORRAP_AS_WRITTEN ? fmorrap::WeightFormula::as_written
                                                            : fmorrap::WeightFormula::dataset_consistent;
  p.metrics.volume = o.volume_formula == FMORRAP_AS_WRITTEN ? fmorrap::VolumeFormula::as_written
                                                            : fmorrap::VolumeFormula::dataset_consistent;
  return p;
}

void check_options(const fmorrap_solve_options& o) {
  fmorrap::require(o.algorithm == FMORRAP_PSO || o.algorithm == FMORRAP_GA, "unknown algorithm code");
  fmorrap::require(o.weight_formula == FMORRAP_DATASET_CONSISTENT || o.weight_formula == FMORRAP_AS_WRITTEN,
                   "unknown weight formula code");
  fmorrap::require(o.volume_formula == FMORRAP_DATASET_CONSISTENT || o.volume_formula == FMORRAP_AS_WRITTEN,
                   "unknown volume formula code");
  fmorrap::require(o.fitness == FMORRAP_FITNESS_NORMALIZED || o.fitness == FMORRAP_FITNESS_RAW,
                   "unknown fitness code");
  fmorrap::require(o.aggregation == FMORRAP_AGGREGATION_EXTENSION || o.aggregation == FMORRAP_AGGREGATION_POINTWISE,
                   "unknown aggregation code");
}

fmorrap::RunResult solve_one(const fmorrap::Dataset& d, const fmorrap_solve_options& o, double xi1, double xi2,
                             std::uint64_t seed) {
  const fmorrap::Problem problem = make_problem(d, o, xi1, xi2);
  if (o.algorithm == FMORRAP_PSO) {
    fmorrap::SwarmConfig c;
    c.population = o.population;
    c.iterations = o.iterations;
    c.c1 = o.c1;
    c.c2 = o.c2;
    if (o.k_fixed) c.k = o.k;
    c.velocity_clamp = o.velocity_clamp;
    c.seed = seed;
    return fmorrap::pso_solve(problem, c);
  }
  fmorrap::GaConfig c;
  c.population = o.population;
  c.generations = o.iterations;
  c.crossover = o.crossover;
  c.mutation = o.mutation;
  c.tournament = o.tournament;
  c.seed = seed;
  return fmorrap::ga_solve(problem, c);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* fmorrap_last_error(void) { return g_last_error.c_str(); }

const char* fmorrap_status_string(fmorrap_status status) {
  switch (status) {
    case FMORRAP_OK:
      return "ok";
    case FMORRAP_E_INVALID_ARGUMENT:
      return "invalid argument";
    case FMORRAP_E_DEGENERATE:
      return "degenerate input";
    case FMORRAP_E_PARSE:
      return "parse error";
    case FMORRAP_E_IO:
      return "i/o error";
    case FMORRAP_E_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* fmorrap_version(void) { return "0.1.0"; }

fmorrap_status fmorrap_parse_enum(const char* category, const char* text, int* out) {
  return guarded([&] {
    need(category, "category");
    need(text, "text");
    need(out, "out");
    const std::string cat(category);
    if (cat == "algorithm") {
      const std::string t(text);
      if (t == "pso" || t == "PSO") {
        *out = FMORRAP_PSO;
      } else if (t == "ga" || t == "GA") {
        *out = FMORRAP_GA;
      } else {
        fmorrap::fail(fmorrap::ErrorKind::invalid_argument, "unknown algorithm '" + t + "' (expected pso or ga)");
      }
    } else if (cat == "topology") {
      *out = static_cast<int>(fmorrap::parse_topology(text));
    } else if (cat == "weight-formula") {
      *out = static_cast<int>(fmorrap::parse_weight_formula(text));
    } else if (cat == "volume-formula") {
      *out = static_cast<int>(fmorrap::parse_volume_formula(text));
    } else if (cat == "fitness") {
      *out = static_cast<int>(fmorrap::parse_fitness_mode(text));
    } else if (cat == "aggregation") {
      *out = static_cast<int>(fmorrap::parse_aggregation(text));
    } else {
      fmorrap::fail(fmorrap::ErrorKind::invalid_argument, "unknown option category '" + cat + "'");
    }
  });
}

fmorrap_status fmorrap_dataset_load(const char* path, fmorrap_dataset** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto* d = new fmorrap_dataset{fmorrap::load_dataset(path)};
    *out = d;
  });
}

void fmorrap_dataset_free(fmorrap_dataset* dataset) { delete dataset; }

fmorrap_status fmorrap_dataset_get_info(const fmorrap_dataset* dataset, fmorrap_dataset_info* out) {
  return guarded([&] {
    need(dataset, "dataset");
    need(out, "out");
    const fmorrap::SystemSpec& s = dataset->data.spec;
    out->topology = s.topology == fmorrap::Topology::series_parallel ? FMORRAP_SERIES_PARALLEL : FMORRAP_PARALLEL_SERIES;
    out->subsystems = s.size();
    out->mission_time = s.mission_time;
    out->weight_limit = s.limits.weight;
    out->volume_limit = s.limits.volume;
    out->cost_limit = s.limits.cost;
    out->r_lo = s.r_range.lo;
    out->r_hi = s.r_range.hi;
    out->n_lo = s.n_range.lo;
    out->n_hi = s.n_range.hi;
    out->bounds_count = dataset->data.bounds.size();
  });
}

fmorrap_status fmorrap_dataset_get_bounds(const fmorrap_dataset* dataset, size_t index, double weights[2],
                                          double bounds[4]) {
  return guarded([&] {
    need(dataset, "dataset");
    need(weights, "weights");
    need(bounds, "bounds");
    fmorrap::require(index < dataset->data.bounds.size(), "bounds index out of range");
    const fmorrap::BoundsEntry& e = dataset->data.bounds[index];
    weights[0] = e.weights.reliability;
    weights[1] = e.weights.cost;
    bounds[0] = e.bounds.r_left;
    bounds[1] = e.bounds.r_right;
    bounds[2] = e.bounds.c_left;
    bounds[3] = e.bounds.c_right;
  });
}

fmorrap_status fmorrap_evaluate(const fmorrap_dataset* dataset, const double* r, const int* n, size_t m,
                                fmorrap_metrics* out) {
  return guarded([&] {
    need(dataset, "dataset");
    need(r, "r");
    need(n, "n");
    need(out, "out");
    const fmorrap::SystemSpec& s = dataset->data.spec;
    fmorrap::require(m == s.size(), "expected " + std::to_string(s.size()) + " sub-systems, got " + std::to_string(m));
    fmorrap::Candidate c{std::vector<double>(r, r + m), std::vector<int>(n, n + m)};
    fmorrap::validate_candidate(s, c);
    const fmorrap::MetricSet dc = fmorrap::evaluate_metrics(s, c);
    out->reliability = dc.reliability;
    out->cost = dc.cost;
    out->weight_dataset_consistent = dc.weight;
    out->weight_as_written = fmorrap::system_weight(s, c, fmorrap::WeightFormula::as_written);
    out->volume_dataset_consistent = dc.volume;
    out->volume_as_written = fmorrap::system_volume(s, c, fmorrap::VolumeFormula::as_written);
    out->violation = fmorrap::constraint_violation(s, dc);
    out->feasible = fmorrap::is_feasible(s, dc) ? 1 : 0;
  });
}

void fmorrap_solve_options_init(fmorrap_solve_options* o) {
  if (!o) return;
  const fmorrap::SwarmConfig swarm;
  const fmorrap::GaConfig ga;
  o->algorithm = FMORRAP_PSO;
  o->population = swarm.population;
  o->iterations = swarm.iterations;
  o->grid_size = fmorrap::FitnessConfig{}.grid_size;
  o->weight_formula = FMORRAP_DATASET_CONSISTENT;
  o->volume_formula = FMORRAP_DATASET_CONSISTENT;
  o->fitness = FMORRAP_FITNESS_NORMALIZED;
  o->aggregation = FMORRAP_AGGREGATION_EXTENSION;
  o->c1 = swarm.c1;
  o->c2 = swarm.c2;
  o->k_fixed = 0;
  o->k = 0.0;
  o->velocity_clamp = swarm.velocity_clamp;
  o->crossover = ga.crossover;
  o->mutation = ga.mutation;
  o->tournament = ga.tournament;
}

fmorrap_status fmorrap_solve(const fmorrap_dataset* dataset, const fmorrap_solve_options* options, double xi1,
                             double xi2, uint64_t seed, fmorrap_run** out) {
  return guarded([&] {
    need(dataset, "dataset");
    need(options, "options");
    need(out, "out");
    *out = nullptr;
    check_options(*options);
    *out = new fmorrap_run{solve_one(dataset->data, *options, xi1, xi2, seed)};
  });
}

void fmorrap_run_free(fmorrap_run* run) { delete run; }

fmorrap_status fmorrap_run_get_summary(const fmorrap_run* run, fmorrap_run_summary* out) {
  return guarded([&] {
    need(run, "run");
    need(out, "out");
    const fmorrap::RunResult& r = run->result;
    out->xi1 = r.weights.reliability;
    out->xi2 = r.weights.cost;
    out->seed = r.seed;
    out->feasible = r.feasible ? 1 : 0;
    out->violation = r.violation;
    out->reliability = r.metrics.reliability;
    out->cost = r.metrics.cost;
    out->weight = r.metrics.weight;
    out->volume = r.metrics.volume;
    out->y_r = r.objectives.reliability;
    out->y_c = r.objectives.cost;
    out->fitness = r.objectives.fitness;
    out->k = r.k;
    out->subsystems = r.best.r.size();
    out->trace_length = r.trace.size();
  });
}

fmorrap_status fmorrap_run_get_decision(const fmorrap_run* run, double* r, int* n, size_t m) {
  return guarded([&] {
    need(run, "run");
    need(r, "r");
    need(n, "n");
    const fmorrap::Candidate& c = run->result.best;
    fmorrap::require(m == c.r.size(), "decision buffer length mismatch");
    std::copy(c.r.begin(), c.r.end(), r);
    std::copy(c.n.begin(), c.n.end(), n);
  });
}

fmorrap_status fmorrap_run_get_trace(const fmorrap_run* run, double* out, size_t length) {
  return guarded([&] {
    need(run, "run");
    need(out, "out");
    fmorrap::require(length == run->result.trace.size(), "trace buffer length mismatch");
    std::copy(run->result.trace.begin(), run->result.trace.end(), out);
  });
}

fmorrap_status fmorrap_solve_batch(const fmorrap_dataset* dataset, const fmorrap_solve_options* options,
                                   const double* weights, size_t weight_count, const uint64_t* seeds,
                                   size_t seed_count, unsigned threads, fmorrap_run_set** out) {
  return guarded([&] {
    need(dataset, "dataset");
    need(options, "options");
    need(weights, "weights");
    need(seeds, "seeds");
    need(out, "out");
    *out = nullptr;
    check_options(*options);
    fmorrap::require(weight_count > 0 && seed_count > 0, "need at least one weight vector and one seed");
    for (size_t w = 0; w < weight_count; ++w) {
      (void)dataset->data.bounds_for({weights[2 * w], weights[2 * w + 1]});
    }

    const size_t total = weight_count * seed_count;
    std::vector<fmorrap::RunResult> results(total);
    std::vector<std::exception_ptr> errors(total);
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t i = next++; i < total; i = next++) {
        try {
          const size_t w = i / seed_count;
          results[i] = solve_one(dataset->data, *options, weights[2 * w], weights[2 * w + 1], seeds[i % seed_count]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    unsigned n_threads = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<size_t>(n_threads, total));
    if (n_threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    auto* set = new fmorrap_run_set;
    set->algorithm = options->algorithm == FMORRAP_PSO ? "pso" : "ga";
    set->runs.reserve(total);
    for (fmorrap::RunResult& r : results) set->runs.push_back(fmorrap_run{std::move(r)});
    *out = set;
  });
}

void fmorrap_run_set_free(fmorrap_run_set* set) { delete set; }

size_t fmorrap_run_set_size(const fmorrap_run_set* set) { return set ? set->runs.size() : 0; }

const fmorrap_run* fmorrap_run_set_get(const fmorrap_run_set* set, size_t index) {
  if (!set || index >= set->runs.size()) return nullptr;
  return &set->runs[index];
}

fmorrap_status fmorrap_run_set_write(const fmorrap_run_set* set, const char* out_dir, const char* dataset_label,
                                     int front_only) {
  return guarded([&] {
    need(set, "set");
    need(out_dir, "out_dir");
    fmorrap::ResultSet results;
    results.dataset = dataset_label ? dataset_label : "";
    for (const fmorrap_run& r : set->runs) results.runs.push_back(r.result);
    fmorrap::write_outputs(out_dir, set->algorithm, results, front_only != 0);
  });
}

fmorrap_status fmorrap_compare_files(const char* path_a, const char* path_b, const char* label_a, const char* label_b,
                                     int welch, const char* csv_path, char** table_out) {
  return guarded([&] {
    need(path_a, "path_a");
    need(path_b, "path_b");
    const fmorrap::ResultSet a = fmorrap::read_results(path_a);
    const fmorrap::ResultSet b = fmorrap::read_results(path_b);
    const fmorrap::Comparison cmp =
        fmorrap::compare_results(a, b, label_a ? label_a : "A", label_b ? label_b : "B",
                                 welch ? fmorrap::TTestKind::welch : fmorrap::TTestKind::pooled);
    if (csv_path) {
      std::ofstream csv(csv_path, std::ios::binary);
      if (!csv) fmorrap::fail(fmorrap::ErrorKind::io, std::string("cannot write '") + csv_path + "'");
      fmorrap::write_comparison_csv(csv, cmp);
      if (!csv) fmorrap::fail(fmorrap::ErrorKind::io, std::string("write failed for '") + csv_path + "'");
    }
    if (table_out) *table_out = copy_string(fmorrap::format_comparison_table(cmp));
  });
}

void fmorrap_string_free(char* text) { std::free(text); }

fmorrap_status fmorrap_t_test(const double* a, size_t na, const double* b, size_t nb, int welch, double* t,
                              double* df, double* p) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    const fmorrap::TTestResult r =
        fmorrap::t_test(std::span(a, na), std::span(b, nb), welch ? fmorrap::TTestKind::welch : fmorrap::TTestKind::pooled);
    if (t) *t = r.t;
    if (df) *df = r.df;
    if (p) *p = r.p;
  });
}

fmorrap_status fmorrap_anova_f(const double* const* groups, const size_t* sizes, size_t group_count, double* f,
                               double* p) {
  return guarded([&] {
    need(groups, "groups");
    need(sizes, "sizes");
    std::vector<std::vector<double>> g(group_count);
    for (size_t i = 0; i < group_count; ++i) {
      need(groups[i], "group");
      g[i].assign(groups[i], groups[i] + sizes[i]);
    }
    const fmorrap::AnovaResult r = fmorrap::anova_f(g);
    if (f) *f = r.f;
    if (p) *p = r.p;
  });
}

}  // extern "C"
