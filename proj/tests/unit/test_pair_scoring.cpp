#include <gtest/gtest.h>

#include <random>
#include <set>

#include "relmap/pair_scoring.hpp"
#include "relmap/pair_table.hpp"
#include "test_support.hpp"

using namespace relmap;
using relmap::testing::axis;
using relmap::testing::fixture;
using relmap::testing::mix;
using relmap::testing::TableEmbedder;

namespace {

RelationSet make_set(const std::string& h, const std::string& t, std::initializer_list<const char*> texts) {
  std::vector<RelationPhrase> ps;
  for (const char* x : texts) ps.push_back(*make_phrase(x, "test"));
  return RelationSet(normalize_entity(h), normalize_entity(t), ps);
}

// Four base phrases on axes 0..3; target phrase i sits at cosine c_i to base phrase i
// and is orthogonal to everything else.
std::shared_ptr<TableEmbedder> figure_embedder(const std::vector<double>& c) {
  auto e = std::make_shared<TableEmbedder>(16);
  const char* base[] = {"revolve around", "be attracted to", "far from", "orbit"};
  const char* target[] = {"circle around", "drawn to", "distant from", "go round"};
  for (std::size_t i = 0; i < c.size(); ++i) {
    e->set(base[i], axis(16, i));
    e->set(target[i], mix(16, i, 8 + i, c[i]));
  }
  return e;
}

PairScorer scorer_for(std::shared_ptr<EmbeddingProvider> e, ScoringParams p = {}) {
  return PairScorer(std::move(e), std::make_shared<const Stoplist>(Stoplist::load_default()), p);
}

}  // namespace

TEST(DirectionalSim, TopThreeOfMatchedEdges) {
  auto e = figure_embedder({0.94, 0.18, 0.92, 0.87});
  const auto scorer = scorer_for(e);
  const auto base = make_set("earth", "sun", {"revolve around", "be attracted to", "far from", "orbit"});
  const auto target = make_set("electron", "nucleus", {"circle around", "drawn to", "distant from", "go round"});
  const auto ev = scorer.directional_sim(base, target);
  EXPECT_NEAR(ev.score, 0.94 + 0.92 + 0.87, 1e-12);
  EXPECT_NEAR(ev.score, 2.73, 1e-12);
  ASSERT_EQ(ev.edges.size(), 3u);
  EXPECT_NEAR(ev.edges[0].weight, 0.94, 1e-12);
  EXPECT_EQ(ev.edges[0].base_label, "revolve around");
  EXPECT_EQ(ev.edges[0].target_phrase, "circle around");
}

TEST(DirectionalSim, TruncationKeepsHeaviestK) {
  auto e = figure_embedder({0.94, 0.5, 0.92, 0.87});
  const auto base = make_set("a", "b", {"revolve around", "be attracted to", "far from", "orbit"});
  const auto target = make_set("c", "d", {"circle around", "drawn to", "distant from", "go round"});
  const auto detail = scorer_for(e).directional_detail(base, target);
  EXPECT_NEAR(detail.matching_weight, 0.94 + 0.5 + 0.92 + 0.87, 1e-12);
  EXPECT_NEAR(detail.evidence.score, 2.73, 1e-12);
  ScoringParams wide;
  wide.top_k = 10;
  EXPECT_NEAR(scorer_for(e, wide).directional_sim(base, target).score, 3.23, 1e-12);
}

TEST(DirectionalSim, EmptySetsScoreZero) {
  auto e = figure_embedder({0.94});
  const auto scorer = scorer_for(e);
  EXPECT_EQ(scorer.directional_sim(make_set("a", "b", {}), make_set("c", "d", {"circle around"})).score, 0.0);
  EXPECT_EQ(scorer.directional_sim(make_set("a", "b", {"revolve around"}), make_set("c", "d", {})).score, 0.0);
}

TEST(DirectionalSim, ClusterEdgeIsMaxOverMembers) {
  auto e = std::make_shared<TableEmbedder>(8);
  e->set("orbit", axis(8, 0));
  e->set("circle", mix(8, 0, 1, 0.9));  // clusters with orbit
  e->set("go round", mix(8, 0, 2, 0.6));
  e->set("loop", mix(8, 1, 3, 0.7));
  const auto scorer = scorer_for(e);
  const auto detail = scorer.directional_detail(make_set("a", "b", {"orbit", "circle"}), make_set("c", "d", {"go round", "loop"}));
  ASSERT_EQ(detail.graph.base_clusters.size(), 1u);
  ASSERT_EQ(detail.graph.target_clusters.size(), 2u);
  double best = 0.0;
  for (const char* b : {"orbit", "circle"}) {
    for (const char* t : {"go round", "loop"}) best = std::max(best, cosine(e->embed(b), e->embed(t)));
  }
  EXPECT_NEAR(detail.evidence.score, best, 1e-12);
  // One base cluster can only be matched once.
  EXPECT_EQ(detail.evidence.edges.size(), 1u);
}

TEST(SimStar, SumOfDirectionsAndPairSwapSymmetry) {
  auto e = figure_embedder({0.94, 0.18, 0.92, 0.87});
  const auto scorer = scorer_for(e);
  RelationIndex index;
  index.insert(make_set("earth", "sun", {"revolve around", "far from"}));
  index.insert(make_set("sun", "earth", {"be attracted to"}));
  index.insert(make_set("electron", "nucleus", {"circle around", "distant from"}));
  index.insert(make_set("nucleus", "electron", {"go round"}));
  const auto earth = normalize_entity("earth"), sun = normalize_entity("sun");
  const auto el = normalize_entity("electron"), nu = normalize_entity("nucleus");
  const auto s = scorer.sim_star(earth, sun, el, nu, index);
  EXPECT_NEAR(s.score, 0.94 + 0.92, 1e-12);
  EXPECT_EQ(s.evidence[0].direction, Direction::Forward);
  EXPECT_EQ(s.evidence[0].score + s.evidence[1].score, s.score);
  EXPECT_EQ(scorer.sim_star(sun, earth, nu, el, index).score, s.score);
  EXPECT_EQ(scorer.sim_star(earth, sun, nu, el, index).score, 0.0);
  EXPECT_THROW(scorer.sim_star(earth, earth, el, nu, index), InputError);
  EXPECT_THROW(scorer.sim_star(earth, sun, el, el, index), InputError);
}

TEST(SimStar, FixtureEarthSunAgainstElectronsNucleus) {
  auto f = relmap::testing::engine_from_snapshot(fixture("solar_atom.snapshot.jsonl"));
  const auto x = f->engine->explain("earth", "sun", "electrons", "nucleus");
  EXPECT_GT(x.similarity.score, 0.0);
  std::set<std::string> base_phrases;
  for (const auto& ev : x.similarity.evidence) {
    for (const auto& edge : ev.edges) base_phrases.insert(edge.base_phrase);
  }
  EXPECT_TRUE(base_phrases.count("revolve around") || base_phrases.count("orbit") || base_phrases.count("rotate around"));
}

TEST(SimStar, FuzzedInvariants) {
  auto provider = std::make_shared<MemoEmbedder>(std::make_shared<HashedNgramEmbedder>(64));
  const auto stop = std::make_shared<const Stoplist>(Stoplist::load_default());
  const std::vector<std::string> vocab{"orbit", "revolve around", "is", "far from", "attract", "spin around",
                                       "pull", "rotate around", "has", "circle", "bind", "hold", "discovered"};
  std::mt19937 rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    ScoringParams p;
    p.sim_threshold = (rng() % 5) / 10.0;
    p.cluster_threshold = 0.2 + (rng() % 8) / 10.0;
    p.top_k = 1 + rng() % 4;
    PairScorer scorer(provider, stop, p);
    const std::vector<std::string> names{"b1", "b2", "t1", "t2"};
    RelationIndex index;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        if (i == j || (i < 2) != (j < 2)) continue;
        std::vector<RelationPhrase> ps;
        std::set<std::string> used;
        const std::size_t n = rng() % 5;
        for (std::size_t k = 0; k < n; ++k) {
          const auto& w = vocab[rng() % vocab.size()];
          if (used.insert(w).second) ps.push_back(*make_phrase(w, "s"));
        }
        index.insert(RelationSet(normalize_entity(names[i]), normalize_entity(names[j]), ps));
      }
    }
    const auto b1 = normalize_entity("b1"), b2 = normalize_entity("b2");
    const auto t1 = normalize_entity("t1"), t2 = normalize_entity("t2");
    const auto s = scorer.sim_star(b1, b2, t1, t2, index);
    EXPECT_GE(s.score, 0.0);
    EXPECT_EQ(s.score, scorer.sim_star(b2, b1, t2, t1, index).score);
    double total = 0.0;
    for (const auto& ev : s.evidence) {
      EXPECT_LE(ev.edges.size(), p.top_k);
      std::set<std::string> bases, targets;
      double dir = 0.0;
      for (const auto& edge : ev.edges) {
        EXPECT_TRUE(bases.insert(edge.base_label).second);
        EXPECT_TRUE(targets.insert(edge.target_label).second);
        EXPECT_GE(edge.weight, p.sim_threshold);
        EXPECT_LE(edge.weight, 1.0 + 1e-12);
        EXPECT_FALSE(stop->contains(edge.base_phrase));
        EXPECT_FALSE(stop->contains(edge.target_phrase));
        dir += edge.weight;
      }
      EXPECT_NEAR(dir, ev.score, 1e-12);
      total += ev.score;
    }
    EXPECT_NEAR(total, s.score, 1e-12);
  }
}

TEST(DirectionalSim, AddingOrthogonalPhraseNeverLowersMatchingWeight) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto e = std::make_shared<TableEmbedder>(24);
    std::vector<std::string> base_texts, target_texts;
    for (int i = 0; i < 4; ++i) {
      base_texts.push_back("b" + std::to_string(i));
      e->set(base_texts.back(), axis(24, static_cast<std::size_t>(i)));
      target_texts.push_back("t" + std::to_string(i));
      e->set(target_texts.back(), mix(24, rng() % 4, 8 + static_cast<std::size_t>(i), (rng() % 100) / 100.0));
    }
    e->set("extra", mix(24, rng() % 4, 20, (rng() % 100) / 100.0));
    const auto scorer = scorer_for(e);
    std::vector<RelationPhrase> bp, tp;
    for (const auto& t : base_texts) bp.push_back({t, "s", {}});
    for (const auto& t : target_texts) {
      if (rng() % 2) tp.push_back({t, "s", {}});
    }
    const RelationSet base(normalize_entity("x"), normalize_entity("y"), bp);
    const double before = scorer.directional_detail(base, RelationSet(normalize_entity("u"), normalize_entity("v"), tp)).matching_weight;
    tp.push_back({"extra", "s", {}});
    const double after = scorer.directional_detail(base, RelationSet(normalize_entity("u"), normalize_entity("v"), tp)).matching_weight;
    EXPECT_GE(after + 1e-12, before);
  }
}

TEST(PairTable, EntryCounts) {
  EXPECT_EQ(PairTable({"b1", "b2"}, {"t1", "t2"}).entry_count(), 2u);
  EXPECT_EQ(PairTable({"b1", "b2", "b3"}, {"t1", "t2", "t3"}).entry_count(), 18u);
  EXPECT_EQ(PairTable({"b1", "b2", "b3", "b4"}, {"t1", "t2"}).entry_count(), 12u);
  EXPECT_THROW(PairTable({"b1"}, {"t1", "t2"}), InputError);
  EXPECT_THROW(PairTable({"b1", "b1"}, {"t1", "t2"}), InputError);
}

TEST(PairTable, SwapRuleAndSortedNames) {
  const auto table = PairTable::from_function({"z", "a", "m"}, {"q", "c"}, [](auto i, auto j, auto k, auto p) {
    return static_cast<double>(1000 * i + 100 * j + 10 * k + p);
  });
  EXPECT_EQ(table.base(), (std::vector<std::string>{"a", "m", "z"}));
  EXPECT_EQ(table.target(), (std::vector<std::string>{"c", "q"}));
  EXPECT_EQ(table.score(0, 2, 1, 0), 210.0);
  EXPECT_EQ(table.score(2, 0, 0, 1), 210.0);
  EXPECT_FALSE(table.all_zero());
}

TEST(PairTable, EmptyIndexScoresZero) {
  const auto scorer = scorer_for(std::make_shared<HashedNgramEmbedder>());
  const auto base = make_domain({"a", "b", "c"}, DomainTag::Base);
  const auto target = make_domain({"x", "y", "z"}, DomainTag::Target);
  const auto table = score_all_pairs(base, target, RelationIndex{}, scorer);
  EXPECT_EQ(table.entry_count(), 18u);
  EXPECT_TRUE(table.all_zero());
}

TEST(PairTable, ThreadCountDoesNotChangeScores) {
  auto f = relmap::testing::engine_from_snapshot(fixture("solar_atom.snapshot.jsonl"));
  const auto r = f->engine->map(relmap::testing::table1_base(), relmap::testing::table1_target());
  RelationIndex both;
  for (const auto& [k, v] : r.index.sets()) both.insert(v);
  const auto t4 = score_all_pairs(r.base, r.target, both, f->engine->scorer(), 4);
  const std::size_t n = r.table.base().size(), m = r.table.target().size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t p = 0; p < m; ++p) {
          if (k != p) EXPECT_EQ(r.table.score(i, j, k, p), t4.score(i, j, k, p));
        }
      }
    }
  }
}
