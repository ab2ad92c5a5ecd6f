#pragma once

#include <functional>
#include <vector>

#include "relmap/mapping_types.hpp"
#include "relmap/pair_scoring.hpp"
#include "relmap/pair_table.hpp"

namespace relmap {

struct SearchConfig {
  std::size_t beam_width = 20;
  ScoringParams scoring;
  std::size_t threads = 1;
};

inline constexpr int kUnmapped = -1;

/// A partial mapping during search, in PairTable indices.
struct BeamState {
  /// assign[i] = target index of base i, or kUnmapped.
  std::vector<int> assign;
  /// Score accumulated through increments.
  double score = 0.0;
  /// (base, target) index pairs in the order they were added.
  std::vector<std::pair<std::size_t, std::size_t>> history;

  std::size_t size() const;
};

/// Called after seeding (iteration 0) and after every expansion with the retained beam.
using BeamObserver = std::function<void(std::size_t iteration, const std::vector<BeamState>& beam)>;

/// Sum of sim* over all pairs of mapped base entities.
double objective_score(const std::vector<int>& assign, const PairTable& table);
double objective_score(const Mapping& mapping, const PairTable& table);

Mapping to_mapping(const std::vector<int>& assign, const PairTable& table, double score);

/// Beam search over partial mappings. Seeds are the `beam_width` best pair-mappings
/// with positive score. Each round adds to the pool every single assignment that
/// strictly increases a state's score, merges states with equal assignments and
/// keeps the best `beam_width`; the search ends when the beam stops changing.
/// Order: score descending, then fewer assignments, then lexicographic assignments.
/// Returned scores are recomputed from the table. With no positive pair-mapping the
/// result is the single empty mapping.
std::vector<Mapping> beam_search(const PairTable& table, const SearchConfig& config = {},
                                 const BeamObserver& observer = {});

/// Every valid mapping (size != 1) with its objective score, canonical order. For
/// small domains only; used as a reference.
std::vector<Mapping> enumerate_mappings(const PairTable& table);

}  // namespace relmap
