#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fmorrap/optimizer.hpp"
#include "fmorrap/stats.hpp"

namespace fmorrap {

inline constexpr int kResultSchemaVersion = 1;

struct ResultSet {
  std::string dataset;  // label of the dataset the runs were solved on
  std::vector<RunResult> runs;
};

/// JSON document with one record per run. Doubles are written in shortest
/// round-trip form, so equal inputs give byte-identical text.
std::string results_to_json(const ResultSet& results);
ResultSet results_from_json(const std::string& text, const std::string& source = "<input>");

/// Pareto CSV, one row per run. With `front_only`, infeasible rows and rows
/// dominated on crisp (R_s up, C_s down) by another row are dropped.
void write_pareto_csv(std::ostream& out, const std::vector<RunResult>& runs, bool front_only);
/// One row per (run, iteration) with the best penalized score so far.
void write_trace_csv(std::ostream& out, const std::vector<RunResult>& runs);

struct OutputPaths {
  std::filesystem::path results;
  std::filesystem::path pareto;
  std::filesystem::path trace;
};

/// Writes <algorithm>_results.json, <algorithm>_pareto.csv and
/// <algorithm>_trace.csv into `dir`, creating it if needed.
OutputPaths write_outputs(const std::filesystem::path& dir, const std::string& algorithm, const ResultSet& results,
                          bool front_only);
ResultSet read_results(const std::filesystem::path& path);

struct ComparisonRow {
  WeightVector weights;
  std::string objective;  // "reliability" or "cost" (crisp system values)
  SampleSummary a;
  SampleSummary b;
  std::optional<TTestResult> t;
  std::optional<AnovaResult> anova;  // one-way ANOVA per objective, a proxy
  std::string note;                  // set when a statistic is undefined
};

struct Comparison {
  std::string label_a;
  std::string label_b;
  std::vector<ComparisonRow> rows;
};

/// Per weight vector and objective: summaries, Student t and the ANOVA
/// proxy. Every weight vector must have >= 2 runs on both sides.
Comparison compare_results(const ResultSet& a, const ResultSet& b, const std::string& label_a,
                           const std::string& label_b, TTestKind kind = TTestKind::pooled);
void write_comparison_csv(std::ostream& out, const Comparison& comparison);
std::string format_comparison_table(const Comparison& comparison);

}  // namespace fmorrap
