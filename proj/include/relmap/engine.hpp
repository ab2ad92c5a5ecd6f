#pragma once

#include <memory>
#include <string>
#include <vector>

#include "relmap/acquisition.hpp"
#include "relmap/beam_search.hpp"
#include "relmap/embedding.hpp"
#include "relmap/pair_scoring.hpp"
#include "relmap/pair_table.hpp"
#include "relmap/snapshot.hpp"
#include "relmap/stoplist.hpp"

namespace relmap {

struct MapResult {
  std::vector<Entity> base;
  std::vector<Entity> target;
  RelationIndex index;
  PairTable table;
  /// Best first; at most beam_width entries. Never empty.
  std::vector<Mapping> ranked;

  const Mapping& best() const { return ranked.front(); }
};

/// Full sim* breakdown of one quadruple.
struct Explanation {
  PairSimilarity similarity;
  DirectionalDetail forward;
  DirectionalDetail backward;
  RelationSet base_forward;
  RelationSet target_forward;
  RelationSet base_backward;
  RelationSet target_backward;
};

/// Acquisition, scoring and search behind one object. The snapshot is shared and
/// grows when live sources answer; the scorer's caches persist across calls.
class Engine {
 public:
  Engine(SourceList sources, std::shared_ptr<Snapshot> snapshot, std::shared_ptr<EmbeddingProvider> provider,
         std::shared_ptr<const Stoplist> stoplist, SearchConfig config = {}, AcquisitionOptions acquisition = {});

  MapResult map(const std::vector<std::string>& base, const std::vector<std::string>& target) const;
  MapResult map(std::vector<Entity> base, std::vector<Entity> target) const;

  /// Relation sets of one domain (all ordered pairs).
  RelationIndex relations(const std::vector<Entity>& domain) const;

  Explanation explain(const std::string& b1, const std::string& b2, const std::string& t1,
                      const std::string& t2) const;

  /// Same snapshot, embeddings and configuration with a different source list.
  Engine with_sources(SourceList sources) const;

  const SourceList& sources() const noexcept { return sources_; }
  const std::shared_ptr<Snapshot>& shared_snapshot() const noexcept { return snapshot_; }
  const std::shared_ptr<EmbeddingProvider>& shared_provider() const noexcept { return provider_; }
  const std::shared_ptr<const Stoplist>& shared_stoplist() const noexcept { return stoplist_; }
  Snapshot& snapshot() const noexcept { return *snapshot_; }
  const PairScorer& scorer() const noexcept { return scorer_; }
  const SearchConfig& config() const noexcept { return config_; }
  const AcquisitionOptions& acquisition() const noexcept { return acquisition_; }

 private:
  SourceList sources_;
  std::shared_ptr<Snapshot> snapshot_;
  std::shared_ptr<EmbeddingProvider> provider_;
  std::shared_ptr<const Stoplist> stoplist_;
  SearchConfig config_;
  AcquisitionOptions acquisition_;
  PairScorer scorer_;
};

}  // namespace relmap
