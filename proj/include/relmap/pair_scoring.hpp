#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "relmap/acquisition.hpp"
#include "relmap/clustering.hpp"
#include "relmap/embedding.hpp"
#include "relmap/mapping_types.hpp"
#include "relmap/matching.hpp"
#include "relmap/stoplist.hpp"

namespace relmap {

struct ScoringParams {
  double sim_threshold = 0.2;
  double cluster_threshold = 0.5;
  std::size_t top_k = 3;
};

/// Bipartite graph between the clusters of two relation sets.
struct ClusterGraph {
  std::vector<RelationCluster> base_clusters;
  std::vector<RelationCluster> target_clusters;
  /// weights[i][j]: max phrase_similarity over members of base cluster i and target cluster j.
  std::vector<std::vector<double>> weights;
  /// Member texts achieving each maximum (empty when the weight is 0).
  std::vector<std::vector<std::pair<std::string, std::string>>> argmax;
};

/// Everything computed for one direction; `evidence` is what sim* keeps.
struct DirectionalDetail {
  ClusterGraph graph;
  /// Full maximum-weight matching, sorted by weight descending then by labels.
  std::vector<MatchedEdge> matching;
  double matching_weight = 0.0;
  DirectionalEvidence evidence;
};

/// Scores relation-set pairs. Embeddings and per-set clusterings are cached, so
/// one scorer should be shared across a run. Safe for concurrent use.
class PairScorer {
 public:
  PairScorer(std::shared_ptr<EmbeddingProvider> provider, std::shared_ptr<const Stoplist> stoplist,
             ScoringParams params = {}, WarningSink warnings = {});

  const ScoringParams& params() const noexcept { return params_; }
  EmbeddingProvider& provider() const noexcept { return *provider_; }
  const Stoplist& stoplist() const noexcept { return *stoplist_; }

  /// Clusters of one relation set (cached by phrase content).
  std::shared_ptr<const std::vector<RelationCluster>> clusters(const RelationSet& set, DomainTag side) const;

  ClusterGraph cluster_graph(const RelationSet& base, const RelationSet& target) const;

  /// Matching, top-k truncation and score for one direction.
  DirectionalDetail directional_detail(const RelationSet& base, const RelationSet& target,
                                       Direction direction = Direction::Forward) const;
  DirectionalEvidence directional_sim(const RelationSet& base, const RelationSet& target,
                                      Direction direction = Direction::Forward) const;

  /// sim*(b1,b2,t1,t2) = sim(R(b1,b2), R(t1,t2)) + sim(R(b2,b1), R(t2,t1)).
  /// Both domains' relation sets are looked up in `index`.
  PairSimilarity sim_star(const Entity& b1, const Entity& b2, const Entity& t1, const Entity& t2,
                          const RelationIndex& index) const;

 private:
  std::shared_ptr<EmbeddingProvider> provider_;
  std::shared_ptr<const Stoplist> stoplist_;
  ScoringParams params_;
  WarningSink warnings_;
  mutable std::shared_mutex cache_mutex_;
  mutable std::map<std::vector<std::string>, std::shared_ptr<const std::vector<RelationCluster>>> cluster_cache_;
};

/// Selects the retained edges of a matching: heaviest first, ties by (base label,
/// target label), at most `top_k` of them.
std::vector<MatchedEdge> retain_top_k(std::vector<MatchedEdge> matching, const ClusterGraph& graph,
                                      std::size_t top_k);

}  // namespace relmap
