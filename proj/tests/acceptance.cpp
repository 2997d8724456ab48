#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fmorrap/dataset.hpp"
#include "fmorrap/fmorrap.h"
#include "fmorrap/stats.hpp"
#include "fmorrap/sysmodel.hpp"
#include "fmorrap/typereduce.hpp"
#include "test_util.hpp"

using namespace fmorrap;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

const Dataset& sp() {
  static const Dataset d = load_dataset(fixtures::data_path("series_parallel.dat"));
  return d;
}
const Dataset& ps() {
  static const Dataset d = load_dataset(fixtures::data_path("parallel_series.dat"));
  return d;
}

const std::vector<WeightVector> kPaperWeights{{1, 1}, {1, 0.5}, {0.8, 0.2}, {0.2, 0.8}, {0.5, 1}};

struct RowTarget {
  Candidate cand;
  double weight;
  double volume;
};

Outcome published_rows() {
  Outcome o;
  const MetricSet m = evaluate_metrics(
      sp().spec, {{0.728966, 0.769185, 0.826255, 0.755018, 0.72388, 0.807148, 0.765235, 0.887747, 0.875649, 0.860357},
                  {3, 3, 3, 3, 3, 3, 3, 2, 2, 2}});
  o.check(std::abs(m.reliability - 0.867612) <= 0.867612 * 1e-5, fmt("R_s %.9f", m.reliability));
  o.check(std::abs(m.cost - 437.075) <= 0.01, fmt("C_s %.6f", m.cost));
  o.check(std::abs(m.weight - 411.9564) <= 1e-3, fmt("W_s %.6f", m.weight));
  o.check(m.volume == 234.0, fmt("V_s %.1f", m.volume));
  if (o.pass) o.detail = fmt("R_s %.6f C_s %.3f", m.reliability, m.cost) + fmt(" W_s %.4f V_s %.0f", m.weight, m.volume);
  return o;
}

Outcome other_rows() {
  Outcome o;
  const std::vector<RowTarget> rows{
      {{{0.85, 0.792164, 0.875391, 0.770279, 0.912668, 0.825766, 0.713281, 0.752163, 0.862834, 0.731219},
        {3, 4, 3, 3, 2, 3, 4, 3, 2, 3}},
       476.8512,
       286.0},
      {{{0.850737, 0.864102, 0.723045, 0.637486, 0.941978, 0.80483, 0.800036, 0.855636, 0.833858, 0.7766},
        {2, 2, 3, 4, 2, 3, 3, 2, 3, 3}},
       419.0664,
       228.0}};
  std::string detail;
  for (const RowTarget& row : rows) {
    const MetricSet m = evaluate_metrics(sp().spec, row.cand);
    o.check(std::abs(m.weight - row.weight) <= 1e-3, fmt("W_s %.6f vs %.4f", m.weight, row.weight));
    o.check(m.volume == row.volume, fmt("V_s %.1f vs %.0f", m.volume, row.volume));
    detail += fmt("W_s %.4f V_s %.0f ", m.weight, m.volume);
  }
  if (o.pass) o.detail = detail;
  return o;
}

Outcome parallel_series_row() {
  Outcome o;
  const MetricSet m =
      evaluate_metrics(ps().spec, {{0.583327, 0.697626, 0.562849, 0.698137, 0.553977}, {3, 2, 2, 4, 2}});
  o.check(std::abs(m.reliability - 0.851456) <= 5e-5, fmt("R_s %.9f", m.reliability));
  o.check(std::abs(m.cost - 103.056) <= 0.05, fmt("C_s %.6f", m.cost));
  o.check(std::abs(m.weight - 192.1318) <= 1e-3, fmt("W_s %.6f", m.weight));
  o.check(m.volume == 101.0, fmt("V_s %.1f", m.volume));
  if (o.pass) o.detail = fmt("R_s %.6f C_s %.3f", m.reliability, m.cost) + fmt(" W_s %.4f V_s %.0f", m.weight, m.volume);
  return o;
}

Outcome weight_formula_gap() {
  Outcome o;
  const Candidate c{{0.728966, 0.769185, 0.826255, 0.755018, 0.72388, 0.807148, 0.765235, 0.887747, 0.875649, 0.860357},
                    {3, 3, 3, 3, 3, 3, 3, 2, 2, 2}};
  const double written = system_weight(sp().spec, c, WeightFormula::as_written);
  const double consistent = system_weight(sp().spec, c, WeightFormula::dataset_consistent);
  o.check(std::abs(written - 350.76) <= 0.01, fmt("as-written %.6f", written));
  o.check(std::abs(consistent - 411.956) <= 1e-3, fmt("dataset-consistent %.6f", consistent));
  o.check(std::abs(written - 411.956) > 1.0, "as-written weight reproduces the published column");
  std::ifstream readme(std::string(FMORRAP_SOURCE_DIR) + "/README.md");
  std::stringstream text;
  text << readme.rdbuf();
  o.check(text.str().find("350.76") != std::string::npos && text.str().find("411.956") != std::string::npos,
          "README does not document the weight-formula gap");
  if (o.pass) o.detail = fmt("as-written %.4f vs published %.4f", written, consistent);
  return o;
}

Outcome ekm_oracle() {
  Outcome o;
  RandomStream rng(2024);
  double worst = 0.0;
  std::size_t max_ratio_iter = 0, max_n = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + rng.index(62);
    const SampledIt2 s = fixtures::random_sampled(rng, n);
    const EkmEnd l = ekm_left_detail(s);
    const EkmEnd r = ekm_right_detail(s);
    const CentroidInterval bf = brute_force_centroid(s);
    worst = std::max({worst, std::abs(l.value - bf.left), std::abs(r.value - bf.right)});
    const std::size_t it = std::max(l.iterations, r.iterations);
    if (it > n) o.check(false, "iterations " + std::to_string(it) + " > N " + std::to_string(n));
    if (it * max_n >= max_ratio_iter * n) {
      max_ratio_iter = it;
      max_n = n;
    }
  }
  o.check(worst <= 1e-9, fmt("max |ekm - oracle| %.3g", worst));
  if (o.pass) o.detail = fmt("max |ekm - oracle| %.2g over 1000 instances", worst);
  return o;
}

Outcome crisp_collapse() {
  Outcome o;
  FitnessConfig cfg;
  cfg.weights = {1.0, 0.0};
  cfg.spread = FuzzySpread::zero;
  const double cell = 1.0 / static_cast<double>(cfg.grid_size - 1);
  RandomStream gen(606);
  double worst = 0.0;
  for (const Dataset* d : {&sp(), &ps()}) {
    for (int trial = 0; trial < 100; ++trial) {
      Candidate c;
      for (std::size_t i = 0; i < d->spec.size(); ++i) {
        c.r.push_back(gen.uniform(d->spec.r_range.lo, d->spec.r_range.hi));
        c.n.push_back(d->spec.n_range.lo + static_cast<int>(gen.index(d->spec.n_range.hi - d->spec.n_range.lo + 1)));
      }
      RandomStream rng(static_cast<std::uint64_t>(trial));
      const FitnessValue v = scalarized_fitness(d->spec, c, d->bounds_for({1, 1}), cfg, rng);
      worst = std::max(worst, std::abs(v.fitness - system_reliability(d->spec, c)));
    }
  }
  o.check(worst <= cell, fmt("max deviation %.3g > cell %.3g", worst, cell));
  if (o.pass) o.detail = fmt("max |fitness - R_s| %.3g (cell %.3g)", worst, cell);
  return o;
}

// ---- solver criteria, driven through the shared-library API -----------------

struct BatchRuns {
  std::string dataset;
  int algorithm;
  std::vector<fmorrap_run_summary> runs;
  std::vector<std::vector<double>> r;
  std::vector<std::vector<int>> n;
  std::vector<std::vector<double>> trace;
};

void api(fmorrap_status s) {
  if (s != FMORRAP_OK) throw std::runtime_error(fmorrap_last_error());
}

BatchRuns solve_batch(const std::string& file, int algorithm, const std::vector<WeightVector>& weights,
                      const std::vector<std::uint64_t>& seeds, const char* out_dir = nullptr) {
  fmorrap_dataset* ds = nullptr;
  api(fmorrap_dataset_load(fixtures::data_path(file).c_str(), &ds));
  fmorrap_solve_options opt;
  fmorrap_solve_options_init(&opt);
  opt.algorithm = algorithm;
  std::vector<double> flat;
  for (const WeightVector& w : weights) flat.insert(flat.end(), {w.reliability, w.cost});
  fmorrap_run_set* set = nullptr;
  const fmorrap_status st =
      fmorrap_solve_batch(ds, &opt, flat.data(), weights.size(), seeds.data(), seeds.size(), 0, &set);
  fmorrap_dataset_free(ds);
  api(st);
  BatchRuns out{file, algorithm, {}, {}, {}, {}};
  for (std::size_t i = 0; i < fmorrap_run_set_size(set); ++i) {
    const fmorrap_run* run = fmorrap_run_set_get(set, i);
    fmorrap_run_summary s;
    api(fmorrap_run_get_summary(run, &s));
    std::vector<double> r(s.subsystems), tr(s.trace_length);
    std::vector<int> n(s.subsystems);
    api(fmorrap_run_get_decision(run, r.data(), n.data(), s.subsystems));
    api(fmorrap_run_get_trace(run, tr.data(), tr.size()));
    out.runs.push_back(s);
    out.r.push_back(std::move(r));
    out.n.push_back(std::move(n));
    out.trace.push_back(std::move(tr));
  }
  if (out_dir) {
    const fmorrap_status ws = fmorrap_run_set_write(set, out_dir, file.c_str(), 0);
    fmorrap_run_set_free(set);
    api(ws);
  } else {
    fmorrap_run_set_free(set);
  }
  return out;
}

std::vector<BatchRuns>& full_batches() {
  static std::vector<BatchRuns> batches = [] {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);
    std::vector<BatchRuns> out;
    for (const char* file : {"series_parallel.dat", "parallel_series.dat"}) {
      for (int algo : {FMORRAP_PSO, FMORRAP_GA}) out.push_back(solve_batch(file, algo, kPaperWeights, seeds));
    }
    return out;
  }();
  return batches;
}

Outcome constraint_feasibility() {
  Outcome o;
  std::size_t checked = 0, infeasible = 0;
  for (const BatchRuns& b : full_batches()) {
    const Dataset& d = b.dataset == "series_parallel.dat" ? sp() : ps();
    for (std::size_t i = 0; i < b.runs.size(); ++i) {
      if (!b.runs[i].feasible) {
        ++infeasible;
        continue;
      }
      const MetricSet m = evaluate_metrics(d.spec, {b.r[i], b.n[i]});
      ++checked;
      if (!(m.weight <= d.spec.limits.weight && m.volume <= d.spec.limits.volume)) {
        o.check(false, b.dataset + " seed " + std::to_string(b.runs[i].seed) + fmt(" W %.4f V %.1f", m.weight, m.volume));
      }
    }
  }
  o.check(checked + infeasible == 200, "expected 200 runs");
  o.check(infeasible == 0, std::to_string(infeasible) + " runs reported no feasible best");
  if (o.pass) o.detail = std::to_string(checked) + " feasible bests re-verified";
  return o;
}

Outcome search_quality() {
  Outcome o;
  const BatchRuns& b = full_batches()[0];  // series-parallel, PSO
  std::vector<double> rel;
  for (std::size_t i = 0; i < b.runs.size(); ++i) {
    const fmorrap_run_summary& s = b.runs[i];
    if (!(s.xi1 == 1.0 && s.xi2 == 1.0)) continue;
    rel.push_back(s.reliability);
    o.check(s.cost <= 553.0, fmt("seed %.0f cost %.3f > 553", double(s.seed), s.cost));
  }
  for (const BatchRuns& batch : full_batches()) {
    for (const auto& tr : batch.trace) {
      if (batch.algorithm == FMORRAP_PSO && !std::is_sorted(tr.begin(), tr.end())) {
        o.check(false, "gbest trace decreased in a " + batch.dataset + " run");
      }
    }
  }
  o.check(rel.size() == 10, "expected 10 runs for [1,1]");
  const double median = describe(rel).median;
  o.check(median >= 0.85, fmt("median R_s %.6f < 0.85", median));
  if (o.pass) o.detail = fmt("median R_s %.6f over %.0f seeds, traces non-decreasing", median, double(rel.size()));
  return o;
}

Outcome statistics_checks() {
  Outcome o;
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  const TTestResult t = t_test(a, b);
  const std::vector<std::vector<double>> groups{a, b};
  const AnovaResult f = anova_f(groups);
  const std::vector<double> c{0.2, 0.9, 0.4, 0.7};
  const TTestResult same = t_test(c, c);
  o.check(std::abs(t.t + 3.674) <= 1e-3, fmt("t %.6f", t.t));
  o.check(std::abs(f.f - t.t * t.t) <= 1e-9, fmt("F %.12f vs t^2 %.12f", f.f, t.t * t.t));
  o.check(same.p == 1.0, fmt("identical-sample p %.6f", same.p));
  if (o.pass) o.detail = fmt("t %.4f F %.4f", t.t, f.f);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  const auto root = std::filesystem::temp_directory_path() / "fmorrap_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::size_t files = 0;
  for (const char* file : {"series_parallel.dat", "parallel_series.dat"}) {
    for (int algo : {FMORRAP_PSO, FMORRAP_GA}) {
      const std::string tag = std::string(file) + (algo == FMORRAP_PSO ? "_pso" : "_ga");
      const auto a = root / (tag + "_a");
      const auto b = root / (tag + "_b");
      solve_batch(file, algo, {{1, 1}, {0.2, 0.8}}, {3, 4}, a.string().c_str());
      solve_batch(file, algo, {{1, 1}, {0.2, 0.8}}, {3, 4}, b.string().c_str());
      for (const auto& entry : std::filesystem::directory_iterator(a)) {
        const auto other = b / entry.path().filename();
        o.check(std::filesystem::exists(other) && slurp(entry.path()) == slurp(other),
                entry.path().filename().string() + " differs for " + tag);
        ++files;
      }
    }
  }
  o.check(files == 12, "expected 12 output files, got " + std::to_string(files));
  std::filesystem::remove_all(root);
  if (o.pass) o.detail = std::to_string(files) + " result files byte-identical across repeats";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"series-parallel first published row recomputes", published_rows},
      {"series-parallel remaining published rows recompute", other_rows},
      {"parallel-series published row recomputes", parallel_series_row},
      {"as-written weight law differs from the published column", weight_formula_gap},
      {"EKM matches the enumeration oracle", ekm_oracle},
      {"zero-spread fitness collapses to crisp reliability", crisp_collapse},
      {"reported feasible bests satisfy weight and volume limits", constraint_feasibility},
      {"PSO search quality on series-parallel [1,1]", search_quality},
      {"statistics self-checks", statistics_checks},
      {"repeated solves produce byte-identical files", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
