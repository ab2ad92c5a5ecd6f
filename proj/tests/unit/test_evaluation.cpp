#include <gtest/gtest.h>

#include <cmath>

#include "relmap/evaluation.hpp"
#include "test_support.hpp"

using namespace relmap;
using relmap::testing::fixture;
using relmap::testing::TempDir;

namespace {

AnalogyProblem problem(std::size_t n, std::size_t m) {
  AnalogyProblem p;
  for (std::size_t i = 0; i < n; ++i) p.base.push_back("b" + std::to_string(i));
  for (std::size_t i = 0; i < m; ++i) p.target.push_back("t" + std::to_string(i));
  return p;
}

std::unique_ptr<relmap::testing::FixtureEngine> eval_engine() {
  return relmap::testing::engine_from_snapshot(fixture("eval/snapshot.jsonl"));
}

}  // namespace

TEST(GuessLevel, HandComputedValues) {
  EXPECT_DOUBLE_EQ(guess_level(problem(2, 2), GuessMode::Relaxed), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(guess_level(problem(2, 2), GuessMode::Bijective), 1.0 / 2.0);
  EXPECT_DOUBLE_EQ(guess_level(problem(4, 4), GuessMode::Bijective), 1.0 / 24.0);
  // 3x3: 1 empty + 18 two-pair + 6 three-pair mappings.
  EXPECT_DOUBLE_EQ(guess_level(problem(3, 3), GuessMode::Relaxed), 1.0 / 25.0);
  EXPECT_DOUBLE_EQ(guess_level(problem(3, 3), GuessMode::Relaxed), 1.0 / static_cast<double>(solution_space_size(3, 3)));
  // 4 base, 3 target: ordered choices of 3 images out of 4 bases.
  EXPECT_DOUBLE_EQ(guess_level(problem(4, 3), GuessMode::Bijective), 1.0 / 24.0);
  EXPECT_DOUBLE_EQ(guess_level(problem(4, 3), GuessMode::Relaxed), 1.0 / 61.0);
}

TEST(GuessLevel, LargeDomainsFallBackToFloatingPoint) {
  const std::size_t n = 30;
  double total = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double c = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
    total += c * c * std::exp(std::lgamma(k + 1.0));
  }
  total -= static_cast<double>(n * n);
  const double got = guess_level(problem(n, n), GuessMode::Relaxed);
  EXPECT_NEAR(got * total, 1.0, 1e-9);
}

TEST(Problems, LoadsYamlJsonAndQuads) {
  const auto yaml = load_problems(fixture("eval/problems.yaml"));
  ASSERT_EQ(yaml.size(), 5u);
  EXPECT_EQ(yaml[0].id, "solar-atom");
  EXPECT_EQ(yaml[0].category, ProblemCategory::Near);
  EXPECT_EQ(yaml[1].category, ProblemCategory::Far);
  EXPECT_EQ(yaml[3].gold.size(), 3u);
  EXPECT_EQ(yaml[3].gold.count("ribosome"), 0u);

  TempDir dir;
  const auto json_list = load_problems(dir.write(
      "p.json", R"([{"id":"x","base":["Bird","Nest"],"target":["bee","hive"],"gold":{"bird":"bee","nest":"Hive"},
                     "category":"near"}])"));
  ASSERT_EQ(json_list.size(), 1u);
  EXPECT_EQ(json_list[0].base, (std::vector<std::string>{"bird", "nest"}));
  EXPECT_EQ(json_list[0].gold.at("nest"), "hive");
  EXPECT_EQ(load_problems(dir.write("q.json", R"({"problems":[{"base":["a","b"],"target":["c","d"]}]})"))[0].id,
            "problem-1");

  const auto quads = load_problems(dir.write("q.txt", "# comment\nbird:nest::bee:hive\n\nHand:Glove::Foot:Sock\n"));
  ASSERT_EQ(quads.size(), 2u);
  EXPECT_EQ(quads[0].id, "quad-2");
  EXPECT_EQ(quads[1].gold.at("hand"), "foot");
  EXPECT_EQ(quads[1].gold.at("glove"), "sock");
}

TEST(Problems, LoaderErrors) {
  TempDir dir;
  EXPECT_THROW(load_problems(dir.path() / "none.yaml"), ConfigError);
  EXPECT_THROW(load_problems(dir.write("a.json", "[{")), ParseError);
  EXPECT_THROW(load_problems(dir.write("b.txt", "bird nest bee hive\n")), ParseError);
  EXPECT_THROW(load_problems(dir.write("c.yaml", "problems: 3\n")), ParseError);
  EXPECT_THROW(load_problems(dir.write("d.json", R"([{"id":"a","base":["x","y"],"target":["p","q"]},
                                                   {"id":"a","base":["x","y"],"target":["p","q"]}])")),
               ParseError);
  EXPECT_THROW(load_problems(dir.write("e.json", R"([{"base":["x","y"],"target":["p","q"],"gold":{"x":"p"}}])")),
               InputError);
  EXPECT_THROW(load_problems(dir.write("f.json", R"([{"base":["x","y"],"target":["p","q"],"gold":{"x":"p","y":"p"}}])")),
               InputError);
  EXPECT_THROW(load_problems(dir.write("g.json", R"([{"base":["x"],"target":["p","q"]}])")), InputError);
  EXPECT_EQ(problem_category_from_string("extended"), ProblemCategory::Extended);
  EXPECT_THROW(problem_category_from_string("weird"), ParseError);
}

TEST(Evaluate, FixtureSuiteIsPerfect) {
  auto f = eval_engine();
  const auto problems = load_problems(fixture("eval/problems.yaml"));
  const auto report = evaluate(problems, *f->engine);
  ASSERT_EQ(report.problems.size(), 5u);
  for (const auto& r : report.problems) {
    EXPECT_TRUE(r.covered) << r.id;
    EXPECT_TRUE(r.perfect()) << r.id;
    EXPECT_EQ(r.correct_pairs, r.gold_pairs) << r.id;
  }
  const auto& a = report.aggregate;
  EXPECT_EQ(a.evaluated, 5u);
  EXPECT_EQ(a.uncovered, 0u);
  EXPECT_DOUBLE_EQ(a.perfect, 1.0);
  EXPECT_DOUBLE_EQ(a.per_entity, 17.0 / 17.0);
  EXPECT_DOUBLE_EQ(a.top2, 1.0);
  EXPECT_DOUBLE_EQ(a.top3, 1.0);
  const double bij = (1.0 / 120 + 1.0 / 24 + 1.0 / 6 + 1.0 / 24 + 1.0 / 2) / 5;
  const double rel = (1.0 / 1521 + 1.0 / 193 + 1.0 / 25 + 1.0 / 61 + 1.0 / 3) / 5;
  EXPECT_NEAR(a.mean_guess_bijective, bij, 1e-12);
  EXPECT_NEAR(a.mean_guess_relaxed, rel, 1e-12);
  EXPECT_EQ(std::round(a.mean_guess_bijective * 1e4), 1517.0);
  EXPECT_EQ(std::round(a.mean_guess_relaxed * 1e4), 791.0);
}

TEST(Evaluate, GoldAtRankTwo) {
  auto f = eval_engine();
  AnalogyProblem p;
  p.id = "rank2";
  p.base = relmap::testing::table1_base();
  p.target = relmap::testing::table1_target();
  p.gold = relmap::testing::table1_gold();
  p.gold.erase("newton");
  validate_problem(p);
  const auto report = evaluate({p}, *f->engine);
  const auto& r = report.problems.at(0);
  ASSERT_TRUE(r.gold_rank);
  EXPECT_EQ(*r.gold_rank, 2u);
  EXPECT_FALSE(r.perfect());
  EXPECT_TRUE(r.within_top(2));
  EXPECT_TRUE(r.within_top(3));
  EXPECT_EQ(r.correct_pairs, 4u);
  EXPECT_DOUBLE_EQ(report.aggregate.perfect, 0.0);
  EXPECT_DOUBLE_EQ(report.aggregate.top2, 1.0);
  EXPECT_DOUBLE_EQ(report.aggregate.per_entity, 1.0);
}

TEST(Evaluate, PartiallyWrongMapping) {
  auto f = eval_engine();
  AnalogyProblem p;
  p.id = "swapped";
  p.base = {"bird", "nest"};
  p.target = {"bee", "hive"};
  p.gold = {{"bird", "hive"}, {"nest", "bee"}};
  const auto report = evaluate({p}, *f->engine);
  EXPECT_FALSE(report.problems[0].perfect());
  EXPECT_EQ(report.problems[0].correct_pairs, 0u);
  EXPECT_DOUBLE_EQ(report.aggregate.per_entity, 0.0);
}

TEST(Evaluate, UncoveredProblemsAreSetAside) {
  auto f = eval_engine();
  auto problems = load_problems(fixture("eval/problems.yaml"));
  AnalogyProblem p;
  p.id = "unknown";
  p.base = {"pluto", "charon"};
  p.target = {"bee", "hive"};
  problems.push_back(p);
  const auto report = evaluate(problems, *f->engine);
  EXPECT_FALSE(report.problems.back().covered);
  EXPECT_EQ(report.aggregate.uncovered, 1u);
  EXPECT_EQ(report.aggregate.evaluated, 5u);
  EXPECT_DOUBLE_EQ(report.aggregate.perfect, 1.0);
}

TEST(Evaluate, AblatingUninvolvedSourceChangesNothing) {
  auto f = eval_engine();
  const auto problems = load_problems(fixture("eval/problems.yaml"));
  const auto full = report_to_json(evaluate(problems, *f->engine));
  auto ablated = report_to_json(evaluate_without(problems, *f->engine, "wordnet"));
  EXPECT_EQ(ablated.at("ablated_source"), "wordnet");
  ablated.erase("ablated_source");
  auto full_cmp = full;
  full_cmp.erase("ablated_source");
  EXPECT_EQ(full_cmp, ablated);
  EXPECT_THROW(evaluate_without(problems, *f->engine, "nope"), InputError);
}

TEST(Evaluate, PureAndThreadIndependent) {
  auto f = eval_engine();
  const auto problems = load_problems(fixture("eval/problems.yaml"));
  const auto a = report_to_json(evaluate(problems, *f->engine));
  EvalOptions four;
  four.threads = 4;
  const auto b = report_to_json(evaluate(problems, *f->engine, four));
  EXPECT_EQ(a, b);
  const auto text = report_to_text(evaluate(problems, *f->engine));
  EXPECT_NE(text.find("solar-atom"), std::string::npos);
}
