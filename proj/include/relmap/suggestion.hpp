#pragma once

#include <string>
#include <vector>

#include "relmap/engine.hpp"

namespace relmap {

struct SuggestionOptions {
  /// Upper bound on raw harvested names per unmapped entity.
  std::size_t harvest_cap = 200;
  /// Clusters smaller than this are dropped.
  std::size_t min_cluster_size = 2;
};

struct SuggestionCandidate {
  /// Harvested names in the cluster, repeats included, sorted.
  std::vector<std::string> cluster_members;
  std::string representative;
  /// Name whose rerun produced best_mapping: the representative, or for the top
  /// candidate the best-scoring member.
  std::string entity;
  Mapping best_mapping;
  double score = 0.0;
};

enum class SuggestionStatus { Ok, NoSuggestions };

struct SuggestionResult {
  SuggestionStatus status = SuggestionStatus::NoSuggestions;
  std::vector<std::string> harvested;
  std::vector<SuggestionCandidate> candidates;
};

/// Names e with (M(b_i), r, e) for r in R(b_i, unmapped), or (e, r, M(b_i)) for r in
/// R(unmapped, b_i), over every mapped b_i. Generative sources are not asked.
/// Answers are replayed from and recorded into the engine's snapshot. Returned as
/// a multiset of normalized names excluding the current target entities.
std::vector<std::string> harvest_candidates(const Engine& engine, const MapResult& result, const Mapping& mapping,
                                            const std::string& unmapped, const SuggestionOptions& options = {});

/// Proposes target entities for `unmapped`. Harvested names are clustered, every
/// cluster of at least two names is tried by rerunning the mapping with its
/// representative added to the target domain, and clusters are ranked by the best
/// mapping that sends `unmapped` to that name. The top cluster is then retried
/// member by member. Throws InputError when `unmapped` is not an unmapped base entity
/// or the mapping is empty. The input mapping is not modified.
SuggestionResult suggest(const Engine& engine, const MapResult& result, const Mapping& mapping,
                         const std::string& unmapped, const SuggestionOptions& options = {});

}  // namespace relmap
