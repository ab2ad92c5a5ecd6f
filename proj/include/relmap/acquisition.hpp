#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "relmap/entity.hpp"
#include "relmap/errors.hpp"
#include "relmap/snapshot.hpp"
#include "relmap/sources.hpp"

namespace relmap {

using SourceList = std::vector<std::shared_ptr<RelationSource>>;

struct AcquisitionOptions {
  /// Allow network-backed sources to be queried on a snapshot miss.
  bool live = false;
  /// Upper bound on phrases kept per source and directed pair.
  std::size_t per_source_cap = 50;
  WarningSink warnings;
  /// Told the id of every source that failed to answer a query.
  std::function<void(const std::string&)> on_source_failure;
};

/// Union of all sources' relations for the directed pair (head, tail).
/// Snapshot hits are replayed; misses go to the source when allowed and the
/// answer (possibly empty) is recorded. Unavailable sources are skipped with a warning.
RelationSet extract_relations(const Entity& head, const Entity& tail, std::span<const std::shared_ptr<RelationSource>> sources,
                              Snapshot& snapshot, const AcquisitionOptions& options = {});

/// Relation sets for every ordered pair within one domain.
class RelationIndex {
 public:
  void insert(RelationSet set);
  /// Empty set when the pair was never extracted.
  const RelationSet& get(const Entity& head, const Entity& tail) const;
  const RelationSet* find(const std::string& head, const std::string& tail) const;
  std::size_t size() const noexcept { return sets_.size(); }
  const std::map<std::pair<std::string, std::string>, RelationSet>& sets() const noexcept { return sets_; }

 private:
  std::map<std::pair<std::string, std::string>, RelationSet> sets_;
  mutable std::map<std::pair<std::string, std::string>, RelationSet> empties_;
  std::shared_ptr<std::mutex> empties_mutex_ = std::make_shared<std::mutex>();
};

/// Extracts all n*(n-1) directed pairs of `domain`. Pairs (i, j) with i < j are
/// extracted before their reverses so a source answering both directions in one
/// query is consulted once per unordered pair. Up to `threads` workers run each
/// phase; the result does not depend on the schedule.
RelationIndex build_relation_index(const std::vector<Entity>& domain, std::span<const std::shared_ptr<RelationSource>> sources,
                                   Snapshot& snapshot, const AcquisitionOptions& options = {},
                                   std::size_t threads = 1);

}  // namespace relmap
