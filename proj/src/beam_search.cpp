#include "relmap/beam_search.hpp"

#include <algorithm>
#include <map>

#include "relmap/detail/parallel.hpp"

namespace relmap {
namespace {

// Canonical state order: score desc, size asc, assignment list lexicographic.
bool state_before(const BeamState& a, const BeamState& b) {
  if (a.score != b.score) return a.score > b.score;
  const auto sa = a.size(), sb = b.size();
  if (sa != sb) return sa < sb;
  // Base indices follow sorted names, so comparing (base, target) lists in base
  // order is the lexicographic comparison of assignment names.
  std::size_t i = 0, j = 0;
  const std::size_t n = a.assign.size();
  while (i < n && j < n) {
    while (i < n && a.assign[i] == kUnmapped) ++i;
    while (j < n && b.assign[j] == kUnmapped) ++j;
    if (i == n || j == n) break;
    if (i != j) return i < j;
    if (a.assign[i] != b.assign[j]) return a.assign[i] < b.assign[j];
    ++i;
    ++j;
  }
  return false;
}

double increment(const BeamState& s, std::size_t b, std::size_t t, const PairTable& table) {
  double inc = 0.0;
  for (std::size_t i = 0; i < s.assign.size(); ++i) {
    if (s.assign[i] != kUnmapped) inc += table.score(i, b, static_cast<std::size_t>(s.assign[i]), t);
  }
  return inc;
}

std::vector<BeamState> extensions_of(const BeamState& s, const PairTable& table) {
  const std::size_t n = table.base().size(), m = table.target().size();
  std::vector<char> used(m, 0);
  for (int t : s.assign) {
    if (t != kUnmapped) used[static_cast<std::size_t>(t)] = 1;
  }
  std::vector<BeamState> out;
  for (std::size_t b = 0; b < n; ++b) {
    if (s.assign[b] != kUnmapped) continue;
    for (std::size_t t = 0; t < m; ++t) {
      if (used[t]) continue;
      const double inc = increment(s, b, t, table);
      if (!(inc > 0.0)) continue;
      BeamState next = s;
      next.assign[b] = static_cast<int>(t);
      next.score = s.score + inc;
      next.history.emplace_back(b, t);
      out.push_back(std::move(next));
    }
  }
  return out;
}

// Sorts canonically, drops later duplicates of an assignment vector, truncates.
void select(std::vector<BeamState>& pool, std::size_t width) {
  std::stable_sort(pool.begin(), pool.end(), state_before);
  std::vector<BeamState> kept;
  std::map<std::vector<int>, bool> seen;
  for (auto& s : pool) {
    if (kept.size() == width) break;
    if (!seen.emplace(s.assign, true).second) continue;
    kept.push_back(std::move(s));
  }
  pool = std::move(kept);
}

bool same_beam(const std::vector<BeamState>& a, const std::vector<BeamState>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].assign != b[i].assign) return false;
  }
  return true;
}

}  // namespace

std::size_t BeamState::size() const {
  return static_cast<std::size_t>(std::count_if(assign.begin(), assign.end(), [](int t) { return t != kUnmapped; }));
}

double objective_score(const std::vector<int>& assign, const PairTable& table) {
  double total = 0.0;
  for (std::size_t i = 0; i < assign.size(); ++i) {
    if (assign[i] == kUnmapped) continue;
    for (std::size_t j = i + 1; j < assign.size(); ++j) {
      if (assign[j] == kUnmapped) continue;
      total += table.score(i, j, static_cast<std::size_t>(assign[i]), static_cast<std::size_t>(assign[j]));
    }
  }
  return total;
}

double objective_score(const Mapping& mapping, const PairTable& table) {
  std::vector<int> assign(table.base().size(), kUnmapped);
  for (const auto& a : mapping.pairs()) {
    assign[table.base_index(a.base)] = static_cast<int>(table.target_index(a.target));
  }
  return objective_score(assign, table);
}

Mapping to_mapping(const std::vector<int>& assign, const PairTable& table, double score) {
  std::vector<Assignment> pairs;
  for (std::size_t i = 0; i < assign.size(); ++i) {
    if (assign[i] != kUnmapped) pairs.push_back({table.base()[i], table.target()[static_cast<std::size_t>(assign[i])]});
  }
  return Mapping(std::move(pairs), table.base(), table.target(), score);
}

std::vector<Mapping> beam_search(const PairTable& table, const SearchConfig& config, const BeamObserver& observer) {
  if (config.beam_width < 1) throw ConfigError("beam width must be at least 1");
  const std::size_t n = table.base().size(), m = table.target().size();

  std::vector<BeamState> beam;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t p = 0; p < m; ++p) {
          if (k == p) continue;
          const double s = table.score(i, j, k, p);
          if (!(s > 0.0)) continue;
          BeamState seed;
          seed.assign.assign(n, kUnmapped);
          seed.assign[i] = static_cast<int>(k);
          seed.assign[j] = static_cast<int>(p);
          seed.score = s;
          seed.history = {{i, k}, {j, p}};
          beam.push_back(std::move(seed));
        }
      }
    }
  }
  if (beam.empty()) return {to_mapping(std::vector<int>(n, kUnmapped), table, 0.0)};
  select(beam, config.beam_width);
  if (observer) observer(0, beam);

  for (std::size_t iteration = 1;; ++iteration) {
    std::vector<std::vector<BeamState>> grown(beam.size());
    detail::parallel_for(beam.size(), config.threads, [&](std::size_t s) { grown[s] = extensions_of(beam[s], table); });

    std::vector<BeamState> candidates = beam;
    bool any = false;
    for (auto& g : grown) {
      any = any || !g.empty();
      for (auto& s : g) candidates.push_back(std::move(s));
    }
    if (!any) break;
    select(candidates, config.beam_width);
    const bool unchanged = same_beam(candidates, beam);
    beam = std::move(candidates);
    if (observer) observer(iteration, beam);
    if (unchanged) break;
  }

  for (auto& s : beam) s.score = objective_score(s.assign, table);
  std::stable_sort(beam.begin(), beam.end(), state_before);
  std::vector<Mapping> out;
  out.reserve(beam.size());
  for (const auto& s : beam) out.push_back(to_mapping(s.assign, table, s.score));
  return out;
}

std::vector<Mapping> enumerate_mappings(const PairTable& table) {
  const std::size_t n = table.base().size(), m = table.target().size();
  std::vector<BeamState> all;
  std::vector<int> assign(n, kUnmapped);
  std::vector<char> used(m, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      BeamState s;
      s.assign = assign;
      if (s.size() == 1) return;
      s.score = objective_score(assign, table);
      all.push_back(std::move(s));
      return;
    }
    rec(i + 1);
    for (std::size_t t = 0; t < m; ++t) {
      if (used[t]) continue;
      used[t] = 1;
      assign[i] = static_cast<int>(t);
      rec(i + 1);
      assign[i] = kUnmapped;
      used[t] = 0;
    }
  };
  rec(0);
  std::stable_sort(all.begin(), all.end(), state_before);
  std::vector<Mapping> out;
  out.reserve(all.size());
  for (const auto& s : all) out.push_back(to_mapping(s.assign, table, s.score));
  return out;
}

}  // namespace relmap
