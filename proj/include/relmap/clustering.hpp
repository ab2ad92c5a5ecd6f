#pragma once

#include <span>
#include <string>
#include <vector>

#include "relmap/embedding.hpp"
#include "relmap/entity.hpp"
#include "relmap/errors.hpp"

namespace relmap {

/// Output of the generic clustering core: member indices (ascending) and the index
/// of each group's representative.
struct Agglomeration {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> representatives;
};

/// Average-linkage agglomerative clustering on distance 1 - cosine.
///
/// Repeatedly merges the closest pair of groups while their distance is at most
/// `distance_threshold`. Among equally close pairs the one whose (smaller, larger)
/// representative labels are lexicographically smallest wins. A group's
/// representative is the member with the highest mean cosine to the other members,
/// ties going to the smallest label. Groups are returned ordered by representative
/// label. Labels may repeat; `vectors` must be unit-norm and parallel to `labels`.
Agglomeration agglomerate(std::span<const std::string> labels, std::span<const Vector> vectors,
                          double distance_threshold);

struct RelationCluster {
  std::vector<RelationPhrase> members;
  RelationPhrase representative;
  DomainTag side = DomainTag::Base;
};

/// Clusters deduplicated phrases of one side. Phrases whose embedding fails are
/// left out with a warning. Throws InputError for duplicate phrase texts or a
/// threshold outside (0, 1].
std::vector<RelationCluster> cluster_relations(std::span<const RelationPhrase> phrases, EmbeddingProvider& provider,
                                               double distance_threshold, DomainTag side = DomainTag::Base,
                                               const WarningSink& warnings = {});

}  // namespace relmap
