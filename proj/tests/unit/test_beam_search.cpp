#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "relmap/beam_search.hpp"
#include "relmap/pair_table.hpp"
#include "test_support.hpp"

using namespace relmap;

namespace {

using ScoreFn = std::function<double(std::size_t, std::size_t, std::size_t, std::size_t)>;

std::vector<std::string> names(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

struct Instance {
  PairTable table;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, double> raw;  // i < j
};

// Dense or sparse random sim* values, stored so the test can evaluate the objective itself.
Instance random_instance(std::mt19937& rng, std::size_t n, std::size_t m, double zero_rate) {
  Instance inst;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t p = 0; p < m; ++p) {
          if (k != p) inst.raw[{i, j, k, p}] = u(rng) < zero_rate ? 0.0 : 6.0 * u(rng);
        }
      }
    }
  }
  auto& raw = inst.raw;
  inst.table = PairTable::from_function(names("b", n), names("t", m),
                                        [&raw](auto i, auto j, auto k, auto p) { return raw.at({i, j, k, p}); });
  return inst;
}

// The objective written out from the raw values, independent of PairTable::score.
double direct_objective(const Instance& inst, const std::vector<int>& a) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i] < 0 || a[j] < 0) continue;
      total += inst.raw.at({i, j, static_cast<std::size_t>(a[i]), static_cast<std::size_t>(a[j])});
    }
  }
  return total;
}

std::vector<int> assign_of(const Mapping& m, const PairTable& t) {
  std::vector<int> a(t.base().size(), kUnmapped);
  for (const auto& p : m.pairs()) a[t.base_index(p.base)] = static_cast<int>(t.target_index(p.target));
  return a;
}

// All valid assignments (size != 1) with their objective.
std::vector<std::pair<std::vector<int>, double>> brute_force(const Instance& inst) {
  const std::size_t n = inst.table.base().size(), m = inst.table.target().size();
  std::vector<std::pair<std::vector<int>, double>> out;
  std::vector<int> a(n, kUnmapped);
  std::vector<bool> used(m, false);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t size) {
    if (i == n) {
      if (size != 1) out.emplace_back(a, direct_objective(inst, a));
      return;
    }
    rec(i + 1, size);
    for (std::size_t t = 0; t < m; ++t) {
      if (used[t]) continue;
      used[t] = true;
      a[i] = static_cast<int>(t);
      rec(i + 1, size + 1);
      a[i] = kUnmapped;
      used[t] = false;
    }
  };
  rec(0, 0);
  return out;
}

void expect_valid(const Mapping& m, const PairTable& t) {
  EXPECT_NE(m.size(), 1u);
  std::set<std::string> bases, targets;
  for (const auto& p : m.pairs()) {
    EXPECT_TRUE(bases.insert(p.base).second);
    EXPECT_TRUE(targets.insert(p.target).second);
    EXPECT_NO_THROW(t.base_index(p.base));
    EXPECT_NO_THROW(t.target_index(p.target));
  }
}

}  // namespace

TEST(Objective, EmptyAndTwoPair) {
  std::mt19937 rng(1);
  const auto inst = random_instance(rng, 3, 3, 0.0);
  const auto& t = inst.table;
  EXPECT_EQ(objective_score(Mapping({}, t.base(), t.target(), 0.0), t), 0.0);
  const Mapping two({{"b0", "t2"}, {"b2", "t1"}}, t.base(), t.target(), 0.0);
  EXPECT_EQ(objective_score(two, t), inst.raw.at({0, 2, 2, 1}));
  const Mapping swapped({{"b0", "t1"}, {"b2", "t2"}}, t.base(), t.target(), 0.0);
  EXPECT_EQ(objective_score(swapped, t), inst.raw.at({0, 2, 1, 2}));
}

TEST(BeamSearch, AllZeroGivesEmptyMapping) {
  const auto t = PairTable::from_function(names("b", 3), names("t", 3), [](auto, auto, auto, auto) { return 0.0; });
  const auto ranked = beam_search(t);
  ASSERT_EQ(ranked.size(), 1u);
  EXPECT_TRUE(ranked[0].empty());
  EXPECT_EQ(ranked[0].total_score(), 0.0);
  EXPECT_EQ(ranked[0].unmapped_base().size(), 3u);
}

TEST(BeamSearch, RejectsZeroWidth) {
  std::mt19937 rng(1);
  SearchConfig c;
  c.beam_width = 0;
  EXPECT_THROW(beam_search(random_instance(rng, 2, 2, 0.0).table, c), ConfigError);
}

TEST(Enumeration, MatchesCardinalityAndDirectObjective) {
  std::mt19937 rng(8);
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t m = 2; m <= 4; ++m) {
      const auto inst = random_instance(rng, n, m, 0.3);
      const auto all = enumerate_mappings(inst.table);
      EXPECT_EQ(all.size(), solution_space_size(n, m));
      for (const auto& mp : all) EXPECT_NEAR(mp.total_score(), direct_objective(inst, assign_of(mp, inst.table)), 1e-12);
      for (std::size_t i = 1; i < all.size(); ++i) EXPECT_GE(all[i - 1].total_score(), all[i].total_score());
    }
  }
}

TEST(BeamSearch, FindsUniqueOptimumOnSmallInstances) {
  std::mt19937 rng(42);
  int checked = 0, hits = 0;
  while (checked < 150) {
    const std::size_t n = 2 + rng() % 3, m = 2 + rng() % 3;
    const auto inst = random_instance(rng, n, m, (rng() % 2) ? 0.0 : 0.5);
    auto all = brute_force(inst);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (all.size() > 1 && all[0].second - all[1].second <= 1e-6) continue;
    ++checked;
    const auto best = beam_search(inst.table).front();
    expect_valid(best, inst.table);
    if (assign_of(best, inst.table) == all[0].first) ++hits;
  }
  EXPECT_GE(hits, 142);  // at least 95%
}

TEST(BeamSearch, WidthOneIsGreedy) {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 4, m = 2 + rng() % 4;
    const auto inst = random_instance(rng, n, m, 0.4);
    // Greedy: best pair-mapping, then the best strictly improving single assignment.
    std::vector<int> a(n, kUnmapped);
    double best = 0.0;
    for (const auto& [key, v] : inst.raw) {
      if (v > best) {
        best = v;
        std::fill(a.begin(), a.end(), kUnmapped);
        a[std::get<0>(key)] = static_cast<int>(std::get<2>(key));
        a[std::get<1>(key)] = static_cast<int>(std::get<3>(key));
      }
    }
    if (best == 0.0) continue;
    for (;;) {
      double cur = direct_objective(inst, a), gain = 0.0;
      std::vector<int> next;
      for (std::size_t b = 0; b < n; ++b) {
        if (a[b] != kUnmapped) continue;
        for (std::size_t t = 0; t < m; ++t) {
          if (std::find(a.begin(), a.end(), static_cast<int>(t)) != a.end()) continue;
          auto c = a;
          c[b] = static_cast<int>(t);
          const double g = direct_objective(inst, c) - cur;
          if (g > gain) {
            gain = g;
            next = c;
          }
        }
      }
      if (next.empty()) break;
      a = next;
    }
    SearchConfig c;
    c.beam_width = 1;
    const auto ranked = beam_search(inst.table, c);
    ASSERT_EQ(ranked.size(), 1u);
    EXPECT_EQ(assign_of(ranked[0], inst.table), a) << "trial " << trial;
  }
}

TEST(BeamSearch, WideBeamEqualsExhaustiveOnDenseInstances) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 3, m = 2 + rng() % 3;
    const auto inst = random_instance(rng, n, m, 0.0);
    SearchConfig c;
    c.beam_width = solution_space_size(n, m);
    const auto ranked = beam_search(inst.table, c);
    const auto all = enumerate_mappings(inst.table);
    EXPECT_NEAR(ranked.front().total_score(), all.front().total_score(), 1e-12);
    EXPECT_TRUE(ranked.front().same_assignments(all.front()));
  }
}

TEST(BeamSearch, ObserverSeesConsistentMonotoneBeams) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 5, m = 2 + rng() % 5;
    const auto inst = random_instance(rng, n, m, 0.5);
    std::vector<BeamState> previous;
    std::size_t calls = 0;
    SearchConfig c;
    c.beam_width = 1 + rng() % 20;
    beam_search(inst.table, c, [&](std::size_t iteration, const std::vector<BeamState>& beam) {
      EXPECT_EQ(iteration, calls++);
      EXPECT_LE(beam.size(), c.beam_width);
      for (const auto& s : beam) {
        EXPECT_NEAR(s.score, objective_score(s.assign, inst.table), 1e-9);
        EXPECT_NE(s.size(), 1u);
        EXPECT_EQ(s.history.size(), s.size());
      }
      for (std::size_t k = 0; k < std::min(previous.size(), beam.size()); ++k) {
        EXPECT_GE(beam[k].score, previous[k].score);
      }
      EXPECT_GE(beam.size(), previous.size());
      previous = beam;
    });
  }
}

TEST(BeamSearch, ThreadCountDoesNotChangeOutput) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = random_instance(rng, 6, 6, 0.3);
    SearchConfig one, four;
    four.threads = 4;
    const auto a = beam_search(inst.table, one);
    const auto b = beam_search(inst.table, four);
    EXPECT_EQ(a, b);
  }
}

TEST(BeamSearch, UnequalDomainSizesLeaveEntitiesUnmapped) {
  std::mt19937 rng(2);
  const auto wide = random_instance(rng, 2, 4, 0.0);
  const auto best = beam_search(wide.table).front();
  EXPECT_EQ(best.size(), 2u);
  EXPECT_EQ(best.unmapped_target().size(), 2u);
  const auto tall = random_instance(rng, 4, 2, 0.0);
  const auto best2 = beam_search(tall.table).front();
  EXPECT_EQ(best2.size(), 2u);
  EXPECT_EQ(best2.unmapped_base().size(), 2u);
}
