#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmorrap/fmorrap.h"

namespace {

class Failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(fmorrap_status status) {
  if (status != FMORRAP_OK) {
    throw Failure(std::string(fmorrap_status_string(status)) + ": " + fmorrap_last_error());
  }
}

struct DatasetDeleter {
  void operator()(fmorrap_dataset* d) const { fmorrap_dataset_free(d); }
};
struct RunSetDeleter {
  void operator()(fmorrap_run_set* s) const { fmorrap_run_set_free(s); }
};
using DatasetPtr = std::unique_ptr<fmorrap_dataset, DatasetDeleter>;
using RunSetPtr = std::unique_ptr<fmorrap_run_set, RunSetDeleter>;

DatasetPtr load(const std::string& path) {
  fmorrap_dataset* d = nullptr;
  check(fmorrap_dataset_load(path.c_str(), &d));
  return DatasetPtr(d);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Failure(what + ": not a number: '" + s + "'");
  return v;
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!s.empty() && s[0] != '-') v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw Failure(what + ": not a non-negative integer: '" + s + "'");
  return v;
}

// "1,2,5-8" -> 1 2 5 6 7 8
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : split(text, ',')) {
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      seeds.push_back(to_u64(item, "--seeds"));
      continue;
    }
    const std::uint64_t lo = to_u64(item.substr(0, dash), "--seeds");
    const std::uint64_t hi = to_u64(item.substr(dash + 1), "--seeds");
    if (hi < lo) throw Failure("--seeds: empty range '" + item + "'");
    if (hi - lo >= 1000000) throw Failure("--seeds: range '" + item + "' is too large");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw Failure("--seeds: no seeds given");
  return seeds;
}

std::vector<double> parse_weights(const std::vector<std::string>& items) {
  std::vector<double> flat;
  for (const std::string& item : items) {
    const auto parts = split(item, ',');
    if (parts.size() != 2) throw Failure("--weights: expected 'xi1,xi2', got '" + item + "'");
    flat.push_back(to_double(parts[0], "--weights"));
    flat.push_back(to_double(parts[1], "--weights"));
  }
  return flat;
}

int parse_enum(const char* category, const std::string& text) {
  int v = 0;
  check(fmorrap_parse_enum(category, text.c_str(), &v));
  return v;
}

struct SolveArgs {
  std::string dataset;
  std::string algorithm = "pso";
  std::vector<std::string> weights;
  std::string seeds = "1";
  std::size_t population = 100;
  std::size_t iterations = 100;
  std::size_t grid_size = 201;
  std::string weight_formula = "dataset-consistent";
  std::string volume_formula = "dataset-consistent";
  std::string fitness = "normalized";
  std::string aggregation = "extension";
  std::optional<double> k;
  bool front = false;
  std::string out_dir = "results";
  std::string label;
  unsigned threads = 1;
};

int run_solve(const SolveArgs& a) {
  DatasetPtr ds = load(a.dataset);

  fmorrap_solve_options o;
  fmorrap_solve_options_init(&o);
  o.algorithm = parse_enum("algorithm", a.algorithm);
  o.population = a.population;
  o.iterations = a.iterations;
  o.grid_size = a.grid_size;
  o.weight_formula = parse_enum("weight-formula", a.weight_formula);
  o.volume_formula = parse_enum("volume-formula", a.volume_formula);
  o.fitness = parse_enum("fitness", a.fitness);
  o.aggregation = parse_enum("aggregation", a.aggregation);
  if (a.k) {
    o.k_fixed = 1;
    o.k = *a.k;
  }

  std::vector<double> weights;
  if (a.weights.empty()) {
    fmorrap_dataset_info info;
    check(fmorrap_dataset_get_info(ds.get(), &info));
    for (std::size_t i = 0; i < info.bounds_count; ++i) {
      double w[2], b[4];
      check(fmorrap_dataset_get_bounds(ds.get(), i, w, b));
      weights.insert(weights.end(), {w[0], w[1]});
    }
    if (weights.empty()) throw Failure("dataset has no ideal rows; pass --weights");
  } else {
    weights = parse_weights(a.weights);
  }
  const std::vector<std::uint64_t> seeds = parse_seeds(a.seeds);

  fmorrap_run_set* raw = nullptr;
  check(fmorrap_solve_batch(ds.get(), &o, weights.data(), weights.size() / 2, seeds.data(), seeds.size(), a.threads,
                            &raw));
  RunSetPtr set(raw);
  const std::string label = a.label.empty() ? a.dataset : a.label;
  check(fmorrap_run_set_write(set.get(), a.out_dir.c_str(), label.c_str(), a.front ? 1 : 0));

  std::printf("%-12s %6s %10s %10s %10s %6s %9s\n", "weights", "seed", "R_s", "C_s", "W_s", "V_s", "feasible");
  for (std::size_t i = 0; i < fmorrap_run_set_size(set.get()); ++i) {
    fmorrap_run_summary s;
    check(fmorrap_run_get_summary(fmorrap_run_set_get(set.get(), i), &s));
    char w[32];
    std::snprintf(w, sizeof w, "[%g,%g]", s.xi1, s.xi2);
    std::printf("%-12s %6llu %10.6f %10.4f %10.4f %6.0f %9s\n", w, static_cast<unsigned long long>(s.seed),
                s.reliability, s.cost, s.weight, s.volume, s.feasible ? "yes" : "no");
  }
  std::printf("wrote %s/%s_{results.json,pareto.csv,trace.csv}\n", a.out_dir.c_str(), a.algorithm.c_str());
  return 0;
}

struct VerifyArgs {
  std::string dataset;
  std::string r;
  std::string n;
  std::string weight_formula = "dataset-consistent";
  std::string volume_formula = "dataset-consistent";
  std::optional<double> reliability, cost, weight, volume;
  double tol_reliability = 1e-6;
  double tol_cost = 1e-3;
  double tol_weight = 1e-3;
  double tol_volume = 0.0;
};

int run_verify(const VerifyArgs& a) {
  DatasetPtr ds = load(a.dataset);
  std::vector<double> r;
  for (const std::string& s : split(a.r, ',')) r.push_back(to_double(s, "--r"));
  std::vector<int> n;
  for (const std::string& s : split(a.n, ',')) n.push_back(static_cast<int>(to_u64(s, "--n")));
  if (r.size() != n.size()) throw Failure("--r and --n must have the same length");

  fmorrap_metrics m;
  check(fmorrap_evaluate(ds.get(), r.data(), n.data(), r.size(), &m));
  const bool weight_as_written = parse_enum("weight-formula", a.weight_formula) == FMORRAP_AS_WRITTEN;
  const bool volume_as_written = parse_enum("volume-formula", a.volume_formula) == FMORRAP_AS_WRITTEN;
  const double weight = weight_as_written ? m.weight_as_written : m.weight_dataset_consistent;
  const double volume = volume_as_written ? m.volume_as_written : m.volume_dataset_consistent;

  std::printf("R_s                      %.9f\n", m.reliability);
  std::printf("C_s                      %.6f\n", m.cost);
  std::printf("W_s (dataset-consistent) %.6f\n", m.weight_dataset_consistent);
  std::printf("W_s (as-written)         %.6f\n", m.weight_as_written);
  std::printf("V_s (dataset-consistent) %.6f\n", m.volume_dataset_consistent);
  std::printf("V_s (as-written)         %.6f\n", m.volume_as_written);
  std::printf("feasible                 %s (violation %.6f)\n", m.feasible ? "yes" : "no", m.violation);

  bool ok = true;
  auto expect = [&](const char* name, double got, const std::optional<double>& want, double tol) {
    if (!want) return;
    const bool pass = std::abs(got - *want) <= tol;
    ok = ok && pass;
    std::printf("%s %-4s got %.9g expected %.9g tol %.3g\n", pass ? "PASS" : "FAIL", name, got, *want, tol);
  };
  expect("R_s", m.reliability, a.reliability, a.tol_reliability);
  expect("C_s", m.cost, a.cost, a.tol_cost);
  expect("W_s", weight, a.weight, a.tol_weight);
  expect("V_s", volume, a.volume, a.tol_volume);
  return ok ? 0 : 1;
}

struct CompareArgs {
  std::string a;
  std::string b;
  std::string labels;
  std::string csv;
  bool welch = false;
};

int run_compare(const CompareArgs& a) {
  std::string la = "A", lb = "B";
  if (!a.labels.empty()) {
    const auto parts = split(a.labels, ',');
    if (parts.size() != 2) throw Failure("--labels: expected 'name_a,name_b'");
    la = parts[0];
    lb = parts[1];
  }
  char* table = nullptr;
  check(fmorrap_compare_files(a.a.c_str(), a.b.c_str(), la.c_str(), lb.c_str(), a.welch ? 1 : 0,
                              a.csv.empty() ? nullptr : a.csv.c_str(), &table));
  std::fputs(table, stdout);
  fmorrap_string_free(table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval type-2 fuzzy reliability-redundancy allocation solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fmorrap_version());

  SolveArgs solve;
  auto* cmd_solve = app.add_subcommand("solve", "Run PSO or GA over weight vectors and seeds");
  cmd_solve->add_option("dataset", solve.dataset, "Dataset file")->required();
  cmd_solve->add_option("--algorithm", solve.algorithm, "pso or ga")->capture_default_str();
  cmd_solve->add_option("--weights", solve.weights, "Weight vector 'xi1,xi2' (repeatable; default: every ideal row)");
  cmd_solve->add_option("--seeds", solve.seeds, "Seeds, e.g. '1,2,7' or '1-10'")->capture_default_str();
  cmd_solve->add_option("--population", solve.population, "Swarm or population size")->capture_default_str();
  cmd_solve->add_option("--iterations", solve.iterations, "Iterations or generations")->capture_default_str();
  cmd_solve->add_option("--grid-size", solve.grid_size, "Discretization points per MF")->capture_default_str();
  cmd_solve->add_option("--weight-formula", solve.weight_formula, "dataset-consistent or as-written")
      ->capture_default_str();
  cmd_solve->add_option("--volume-formula", solve.volume_formula, "dataset-consistent or as-written")
      ->capture_default_str();
  cmd_solve->add_option("--fitness", solve.fitness, "normalized or raw")->capture_default_str();
  cmd_solve->add_option("--aggregation", solve.aggregation, "extension or pointwise")->capture_default_str();
  cmd_solve->add_option("--k", solve.k, "Fix the PSO constriction k instead of drawing it");
  cmd_solve->add_flag("--front", solve.front, "Keep only non-dominated feasible rows in the Pareto CSV");
  cmd_solve->add_option("--out-dir", solve.out_dir, "Output directory")->capture_default_str();
  cmd_solve->add_option("--label", solve.label, "Dataset label stored in the results (default: path)");
  cmd_solve->add_option("--threads", solve.threads, "Worker threads, 0 = all cores")->capture_default_str();

  VerifyArgs verify;
  auto* cmd_verify = app.add_subcommand("verify", "Recompute crisp metrics for a decision vector");
  cmd_verify->add_option("dataset", verify.dataset, "Dataset file")->required();
  cmd_verify->add_option("--r", verify.r, "Comma-separated component reliabilities")->required();
  cmd_verify->add_option("--n", verify.n, "Comma-separated redundancy counts")->required();
  cmd_verify->add_option("--weight-formula", verify.weight_formula, "Variant checked by --expect-weight")
      ->capture_default_str();
  cmd_verify->add_option("--volume-formula", verify.volume_formula, "Variant checked by --expect-volume")
      ->capture_default_str();
  cmd_verify->add_option("--expect-reliability", verify.reliability, "Expected R_s");
  cmd_verify->add_option("--expect-cost", verify.cost, "Expected C_s");
  cmd_verify->add_option("--expect-weight", verify.weight, "Expected W_s");
  cmd_verify->add_option("--expect-volume", verify.volume, "Expected V_s");
  cmd_verify->add_option("--tol-reliability", verify.tol_reliability, "Absolute tolerance")->capture_default_str();
  cmd_verify->add_option("--tol-cost", verify.tol_cost, "Absolute tolerance")->capture_default_str();
  cmd_verify->add_option("--tol-weight", verify.tol_weight, "Absolute tolerance")->capture_default_str();
  cmd_verify->add_option("--tol-volume", verify.tol_volume, "Absolute tolerance")->capture_default_str();

  CompareArgs compare;
  auto* cmd_compare = app.add_subcommand("compare", "Replication statistics for two results files");
  cmd_compare->add_option("results_a", compare.a, "First results JSON")->required();
  cmd_compare->add_option("results_b", compare.b, "Second results JSON")->required();
  cmd_compare->add_option("--labels", compare.labels, "Group names 'a,b'");
  cmd_compare->add_option("--csv", compare.csv, "Also write the comparison as CSV");
  cmd_compare->add_flag("--welch", compare.welch, "Welch t-test instead of pooled Student");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_solve) return run_solve(solve);
    if (*cmd_verify) return run_verify(verify);
    if (*cmd_compare) return run_compare(compare);
  } catch (const Failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
