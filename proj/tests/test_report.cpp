#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fmorrap/error.hpp"
#include "fmorrap/report.hpp"

using namespace fmorrap;

namespace {

RunResult fake_run(RandomStream& rng, const std::string& algo, WeightVector w, std::uint64_t seed) {
  RunResult r;
  r.weights = w;
  r.seed = seed;
  r.echo.algorithm = algo;
  r.echo.population = 10;
  r.echo.iterations = 3;
  r.echo.grid_size = 201;
  if (algo == "pso") {
    r.echo.c1 = r.echo.c2 = 1.5;
    r.echo.velocity_clamp = 0.2;
    if (seed % 2) r.echo.k_fixed = 0.73;
    r.k = rng.uniform();
  } else {
    r.echo.crossover = 0.6;
    r.echo.mutation = 0.4;
    r.echo.tournament = 2;
  }
  r.best = {{rng.uniform(0.5, 1.0), rng.uniform(0.5, 1.0)}, {1 + static_cast<int>(rng.index(5)), 2}};
  r.metrics = {rng.uniform(0.6, 0.95), rng.uniform(100.0, 500.0), rng.uniform(100.0, 480.0), 200.0};
  r.objectives = {rng.uniform(-1.0, 1.0), rng.uniform(), rng.uniform(100.0, 500.0)};
  r.feasible = rng.uniform() < 0.8;
  r.violation = r.feasible ? 0.0 : rng.uniform(0.0, 10.0);
  r.trace = {-3.0, rng.uniform(-2.0, -1.0), 0.1 / 3.0};
  return r;
}

std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) rows.push_back(line);
  return rows;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Results, JsonRoundTripIsExact) {
  RandomStream rng(51);
  ResultSet set{"unit", {}};
  for (std::uint64_t s = 1; s <= 6; ++s) set.runs.push_back(fake_run(rng, s % 3 ? "pso" : "ga", {1, 0.5}, s));
  const std::string text = results_to_json(set);
  const ResultSet back = results_from_json(text);
  ASSERT_EQ(back.runs.size(), set.runs.size());
  EXPECT_EQ(back.dataset, "unit");
  for (std::size_t i = 0; i < set.runs.size(); ++i) {
    const RunResult& a = set.runs[i];
    const RunResult& b = back.runs[i];
    EXPECT_EQ(a.best, b.best);
    EXPECT_EQ(a.metrics.reliability, b.metrics.reliability);
    EXPECT_EQ(a.objectives.cost, b.objectives.cost);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.echo.k_fixed, b.echo.k_fixed);
    EXPECT_EQ(a.k, b.k);
    EXPECT_EQ(a.weights, b.weights);
  }
  EXPECT_EQ(results_to_json(back), text);
}

TEST(Results, MalformedJsonIsParseError) {
  try {
    results_from_json("{\"format\": \"something\"}", "x.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parse);
  }
  EXPECT_THROW(results_from_json("not json"), Error);
}

TEST(Pareto, OneRowPerRunAndFrontHasNoDominatedRow) {
  RandomStream rng(52);
  std::vector<RunResult> runs;
  for (std::uint64_t s = 1; s <= 40; ++s) runs.push_back(fake_run(rng, "pso", {1, 1}, s));
  std::ostringstream all;
  write_pareto_csv(all, runs, false);
  EXPECT_EQ(csv_rows(all.str()).size(), runs.size());

  std::ostringstream front;
  write_pareto_csv(front, runs, true);
  const auto rows = csv_rows(front.str());
  EXPECT_GE(rows.size(), 1u);
  std::vector<const RunResult*> kept;
  for (const RunResult& r : runs) {
    const bool dominated = std::any_of(runs.begin(), runs.end(), [&](const RunResult& o) {
      return o.feasible && dominates(o.metrics, r.metrics);
    });
    if (r.feasible && !dominated) kept.push_back(&r);
  }
  ASSERT_EQ(rows.size(), kept.size());
  for (const RunResult* a : kept) {
    for (const RunResult* b : kept) EXPECT_FALSE(dominates(a->metrics, b->metrics));
  }
}

TEST(Pareto, SingleRunSingleRecord) {
  RandomStream rng(53);
  std::vector<RunResult> runs{fake_run(rng, "ga", {1, 1}, 9)};
  std::ostringstream out;
  write_pareto_csv(out, runs, false);
  const auto rows = csv_rows(out.str());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].rfind("ga,9,1,1,", 0), 0u) << rows[0];
}

TEST(Outputs, WrittenFilesAreDeterministic) {
  RandomStream rng(54);
  ResultSet set{"unit", {fake_run(rng, "pso", {1, 1}, 1), fake_run(rng, "pso", {1, 1}, 2)}};
  const auto dir = std::filesystem::temp_directory_path() / "fmorrap_report_test";
  std::filesystem::remove_all(dir);
  const OutputPaths p1 = write_outputs(dir / "a", "pso", set, false);
  const OutputPaths p2 = write_outputs(dir / "b", "pso", set, false);
  EXPECT_EQ(slurp(p1.results), slurp(p2.results));
  EXPECT_EQ(slurp(p1.pareto), slurp(p2.pareto));
  EXPECT_EQ(slurp(p1.trace), slurp(p2.trace));
  EXPECT_EQ(csv_rows(slurp(p1.trace)).size(), 6u);
  const ResultSet back = read_results(p1.results);
  EXPECT_EQ(back.runs.size(), 2u);
  std::filesystem::remove_all(dir);
}

TEST(Compare, IdenticalSetsGiveZeroStatistic) {
  RandomStream rng(55);
  ResultSet set{"unit", {}};
  for (std::uint64_t s = 1; s <= 5; ++s) {
    set.runs.push_back(fake_run(rng, "pso", {1, 1}, s));
    set.runs.push_back(fake_run(rng, "pso", {0.5, 1}, s));
  }
  const Comparison c = compare_results(set, set, "pso", "pso");
  ASSERT_EQ(c.rows.size(), 4u);
  for (const ComparisonRow& r : c.rows) {
    ASSERT_TRUE(r.t.has_value());
    EXPECT_EQ(r.t->t, 0.0);
    EXPECT_EQ(r.t->p, 1.0);
    EXPECT_EQ(r.anova->f, 0.0);
    EXPECT_EQ(r.anova->p, 1.0);
  }
  std::ostringstream csv;
  write_comparison_csv(csv, c);
  EXPECT_EQ(csv_rows(csv.str()).size(), 4u);
  EXPECT_NE(format_comparison_table(c).find("proxy"), std::string::npos);
}

TEST(Compare, FiftySeedsAccepted) {
  RandomStream rng(56);
  ResultSet a{"unit", {}}, b{"unit", {}};
  for (std::uint64_t s = 1; s <= 50; ++s) {
    a.runs.push_back(fake_run(rng, "pso", {1, 1}, s));
    b.runs.push_back(fake_run(rng, "ga", {1, 1}, s));
  }
  const Comparison c = compare_results(a, b, "pso", "ga");
  ASSERT_EQ(c.rows.size(), 2u);
  EXPECT_EQ(c.rows[0].a.n, 50u);
  EXPECT_TRUE(std::isfinite(c.rows[0].t->t));
}

TEST(Compare, SingleRunIsAnError) {
  RandomStream rng(57);
  ResultSet a{"unit", {fake_run(rng, "pso", {1, 1}, 1)}};
  ResultSet b{"unit", {fake_run(rng, "ga", {1, 1}, 1), fake_run(rng, "ga", {1, 1}, 2)}};
  try {
    compare_results(a, b, "pso", "ga");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("at least 2 replications"), std::string::npos);
  }
}
