#include "fmorrap/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "fmorrap/dataset.hpp"
#include "fmorrap/error.hpp"

namespace fmorrap {

using nlohmann::json;

namespace {

json run_to_json(const RunResult& r) {
  const RunEcho& e = r.echo;
  json config = {
      {"population", e.population},
      {"iterations", e.iterations},
      {"grid_size", e.grid_size},
      {"weight_formula", std::string(to_string(e.weight_formula))},
      {"volume_formula", std::string(to_string(e.volume_formula))},
      {"fitness", std::string(to_string(e.fitness_mode))},
      {"aggregation", std::string(to_string(e.aggregation))},
  };
  if (e.algorithm == "pso") {
    config["c1"] = e.c1;
    config["c2"] = e.c2;
    config["k"] = e.k_fixed ? json(*e.k_fixed) : json(nullptr);
    config["velocity_clamp"] = e.velocity_clamp;
  } else {
    config["crossover"] = e.crossover;
    config["mutation"] = e.mutation;
    config["tournament"] = e.tournament;
  }
  json j = {
      {"algorithm", e.algorithm},
      {"seed", r.seed},
      {"weights", {r.weights.reliability, r.weights.cost}},
      {"config", config},
      {"best", {{"r", r.best.r}, {"n", r.best.n}}},
      {"metrics",
       {{"reliability", r.metrics.reliability},
        {"cost", r.metrics.cost},
        {"weight", r.metrics.weight},
        {"volume", r.metrics.volume}}},
      {"defuzzified", {{"fitness", r.objectives.fitness}, {"y_r", r.objectives.reliability}, {"y_c", r.objectives.cost}}},
      {"feasible", r.feasible},
      {"violation", r.violation},
      {"trace", r.trace},
  };
  if (e.algorithm == "pso") j["k"] = r.k;
  return j;
}

RunResult run_from_json(const json& j) {
  RunResult r;
  RunEcho& e = r.echo;
  e.algorithm = j.at("algorithm").get<std::string>();
  require(e.algorithm == "pso" || e.algorithm == "ga", "unknown algorithm '" + e.algorithm + "'");
  r.seed = j.at("seed").get<std::uint64_t>();
  const auto& w = j.at("weights");
  require(w.is_array() && w.size() == 2, "weights must be a pair");
  r.weights = {w[0].get<double>(), w[1].get<double>()};

  const json& c = j.at("config");
  e.population = c.at("population").get<std::size_t>();
  e.iterations = c.at("iterations").get<std::size_t>();
  e.grid_size = c.at("grid_size").get<std::size_t>();
  e.weight_formula = parse_weight_formula(c.at("weight_formula").get<std::string>());
  e.volume_formula = parse_volume_formula(c.at("volume_formula").get<std::string>());
  e.fitness_mode = parse_fitness_mode(c.at("fitness").get<std::string>());
  e.aggregation = parse_aggregation(c.at("aggregation").get<std::string>());
  if (e.algorithm == "pso") {
    e.c1 = c.at("c1").get<double>();
    e.c2 = c.at("c2").get<double>();
    if (!c.at("k").is_null()) e.k_fixed = c.at("k").get<double>();
    e.velocity_clamp = c.at("velocity_clamp").get<double>();
    r.k = j.at("k").get<double>();
  } else {
    e.crossover = c.at("crossover").get<double>();
    e.mutation = c.at("mutation").get<double>();
    e.tournament = c.at("tournament").get<std::size_t>();
  }

  r.best.r = j.at("best").at("r").get<std::vector<double>>();
  r.best.n = j.at("best").at("n").get<std::vector<int>>();
  const json& m = j.at("metrics");
  r.metrics = {m.at("reliability").get<double>(), m.at("cost").get<double>(), m.at("weight").get<double>(),
               m.at("volume").get<double>()};
  const json& d = j.at("defuzzified");
  r.objectives = {d.at("fitness").get<double>(), d.at("y_r").get<double>(), d.at("y_c").get<double>()};
  r.feasible = j.at("feasible").get<bool>();
  r.violation = j.at("violation").get<double>();
  r.trace = j.at("trace").get<std::vector<double>>();
  return r;
}

template <typename T>
std::string join_list(const std::vector<T>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ';';
    if constexpr (std::is_floating_point_v<T>) {
      s += format_double(values[i]);
    } else {
      s += std::to_string(values[i]);
    }
  }
  return s;
}

std::string weights_label(const WeightVector& w) {
  return "[" + format_double(w.reliability) + "," + format_double(w.cost) + "]";
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

void open_for_write(std::ofstream& out, const std::filesystem::path& path) {
  out.open(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
}

}  // namespace

std::string results_to_json(const ResultSet& results) {
  json runs = json::array();
  for (const RunResult& r : results.runs) runs.push_back(run_to_json(r));
  json doc = {{"format", "fmorrap-results"}, {"version", kResultSchemaVersion}, {"dataset", results.dataset},
              {"runs", runs}};
  return doc.dump(2) + "\n";
}

ResultSet results_from_json(const std::string& text, const std::string& source) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != "fmorrap-results") fail(ErrorKind::parse, "not a results file");
    if (doc.at("version").get<int>() != kResultSchemaVersion) fail(ErrorKind::parse, "unsupported results version");
    ResultSet set;
    set.dataset = doc.at("dataset").get<std::string>();
    for (const json& r : doc.at("runs")) set.runs.push_back(run_from_json(r));
    return set;
  } catch (const json::exception& e) {
    fail(ErrorKind::parse, source + ": " + e.what());
  } catch (const Error& e) {
    fail(ErrorKind::parse, source + ": " + e.what());
  }
}

void write_pareto_csv(std::ostream& out, const std::vector<RunResult>& runs, bool front_only) {
  out << "algorithm,seed,xi1,xi2,feasible,r,n,R_s,C_s,W_s,V_s,y_r,y_c,fitness\n";
  for (const RunResult& r : runs) {
    if (front_only) {
      if (!r.feasible) continue;
      const bool dominated = std::any_of(runs.begin(), runs.end(), [&](const RunResult& o) {
        return o.feasible && dominates(o.metrics, r.metrics);
      });
      if (dominated) continue;
    }
    out << r.echo.algorithm << ',' << r.seed << ',' << format_double(r.weights.reliability) << ','
        << format_double(r.weights.cost) << ',' << (r.feasible ? 1 : 0) << ',' << join_list(r.best.r) << ','
        << join_list(r.best.n) << ',' << format_double(r.metrics.reliability) << ','
        << format_double(r.metrics.cost) << ',' << format_double(r.metrics.weight) << ','
        << format_double(r.metrics.volume) << ',' << format_double(r.objectives.reliability) << ','
        << format_double(r.objectives.cost) << ',' << format_double(r.objectives.fitness) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const std::vector<RunResult>& runs) {
  out << "algorithm,seed,xi1,xi2,iteration,best_score\n";
  for (const RunResult& r : runs) {
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      out << r.echo.algorithm << ',' << r.seed << ',' << format_double(r.weights.reliability) << ','
          << format_double(r.weights.cost) << ',' << i + 1 << ',' << format_double(r.trace[i]) << '\n';
    }
  }
}

OutputPaths write_outputs(const std::filesystem::path& dir, const std::string& algorithm, const ResultSet& results,
                          bool front_only) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create '" + dir.string() + "': " + ec.message());
  OutputPaths paths{dir / (algorithm + "_results.json"), dir / (algorithm + "_pareto.csv"),
                    dir / (algorithm + "_trace.csv")};
  std::ofstream out;
  open_for_write(out, paths.results);
  out << results_to_json(results);
  out.close();
  open_for_write(out, paths.pareto);
  write_pareto_csv(out, results.runs, front_only);
  out.close();
  open_for_write(out, paths.trace);
  write_trace_csv(out, results.runs);
  out.close();
  if (!out) fail(ErrorKind::io, "write failed in '" + dir.string() + "'");
  return paths;
}

ResultSet read_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open results '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return results_from_json(text.str(), path.string());
}

Comparison compare_results(const ResultSet& a, const ResultSet& b, const std::string& label_a,
                           const std::string& label_b, TTestKind kind) {
  std::vector<WeightVector> keys;
  auto add_keys = [&](const ResultSet& s) {
    for (const RunResult& r : s.runs) {
      if (std::find(keys.begin(), keys.end(), r.weights) == keys.end()) keys.push_back(r.weights);
    }
  };
  add_keys(a);
  add_keys(b);
  require(!keys.empty(), "compare: no runs to compare");

  auto collect = [](const ResultSet& s, const WeightVector& w, bool reliability) {
    std::vector<double> v;
    for (const RunResult& r : s.runs) {
      if (r.weights == w) v.push_back(reliability ? r.metrics.reliability : r.metrics.cost);
    }
    return v;
  };

  Comparison cmp{label_a, label_b, {}};
  for (const WeightVector& w : keys) {
    for (const bool reliability : {true, false}) {
      const std::vector<double> xa = collect(a, w, reliability);
      const std::vector<double> xb = collect(b, w, reliability);
      if (xa.size() < 2 || xb.size() < 2) {
        fail(ErrorKind::invalid_argument, "compare: weight vector " + weights_label(w) + " has " +
                                              std::to_string(xa.size()) + " run(s) in " + label_a + " and " +
                                              std::to_string(xb.size()) + " in " + label_b +
                                              "; at least 2 replications per side are required");
      }
      ComparisonRow row;
      row.weights = w;
      row.objective = reliability ? "reliability" : "cost";
      row.a = describe(xa);
      row.b = describe(xb);
      try {
        row.t = t_test(xa, xb, kind);
        const std::vector<std::vector<double>> groups{xa, xb};
        row.anova = anova_f(groups);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::degenerate) throw;
        row.t.reset();
        row.anova.reset();
        row.note = "degenerate: zero variance with different means";
      }
      cmp.rows.push_back(std::move(row));
    }
  }
  return cmp;
}

void write_comparison_csv(std::ostream& out, const Comparison& c) {
  out << "xi1,xi2,objective,group_a,n_a,mean_a,sd_a,median_a,group_b,n_b,mean_b,sd_b,median_b,"
         "t,df,t_p,anova_proxy_f,anova_proxy_p,note\n";
  for (const ComparisonRow& r : c.rows) {
    out << format_double(r.weights.reliability) << ',' << format_double(r.weights.cost) << ',' << r.objective << ','
        << c.label_a << ',' << r.a.n << ',' << format_double(r.a.mean) << ',' << opt(r.a.sd) << ','
        << format_double(r.a.median) << ',' << c.label_b << ',' << r.b.n << ',' << format_double(r.b.mean) << ','
        << opt(r.b.sd) << ',' << format_double(r.b.median) << ',';
    if (r.t) {
      out << format_double(r.t->t) << ',' << format_double(r.t->df) << ',' << format_double(r.t->p) << ',';
    } else {
      out << ",,,";
    }
    if (r.anova) {
      out << format_double(r.anova->f) << ',' << format_double(r.anova->p) << ',';
    } else {
      out << ",,";
    }
    out << r.note << '\n';
  }
}

std::string format_comparison_table(const Comparison& c) {
  std::ostringstream s;
  s << "Comparison of " << c.label_a << " (A) and " << c.label_b << " (B)\n";
  s << "ANOVA columns are a one-way ANOVA per objective (proxy for a multivariate test).\n\n";
  s << std::left << std::setw(12) << "weights" << std::setw(13) << "objective" << std::right << std::setw(5) << "n_A"
    << std::setw(14) << "mean_A" << std::setw(12) << "sd_A" << std::setw(14) << "median_A" << std::setw(5) << "n_B"
    << std::setw(14) << "mean_B" << std::setw(12) << "sd_B" << std::setw(14) << "median_B" << std::setw(10) << "t"
    << std::setw(10) << "p(t)" << std::setw(11) << "F(proxy)" << std::setw(10) << "p(F)" << '\n';
  auto sd = [](const SampleSummary& x) { return x.sd ? fixed(*x.sd, 6) : std::string("-"); };
  for (const ComparisonRow& r : c.rows) {
    s << std::left << std::setw(12) << weights_label(r.weights) << std::setw(13) << r.objective << std::right
      << std::setw(5) << r.a.n << std::setw(14) << fixed(r.a.mean, 6) << std::setw(12) << sd(r.a) << std::setw(14)
      << fixed(r.a.median, 6) << std::setw(5) << r.b.n << std::setw(14) << fixed(r.b.mean, 6) << std::setw(12)
      << sd(r.b) << std::setw(14) << fixed(r.b.median, 6);
    if (r.t && r.anova) {
      s << std::setw(10) << fixed(r.t->t, 4) << std::setw(10) << fixed(r.t->p, 4) << std::setw(11)
        << fixed(r.anova->f, 4) << std::setw(10) << fixed(r.anova->p, 4);
    } else {
      s << "  " << r.note;
    }
    s << '\n';
  }
  return s.str();
}

}  // namespace fmorrap
