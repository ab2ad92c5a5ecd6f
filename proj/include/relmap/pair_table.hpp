#pragma once

#include <functional>
#include <string>
#include <vector>

#include "relmap/acquisition.hpp"
#include "relmap/mapping_types.hpp"
#include "relmap/pair_scoring.hpp"

namespace relmap {

/// sim* for every unordered base pair and ordered target pair. Base and target
/// names are kept sorted; indices below refer to those sorted lists.
class PairTable {
 public:
  PairTable() = default;
  /// Throws InputError for fewer than two names on a side or duplicate names.
  PairTable(std::vector<std::string> base, std::vector<std::string> target);

  /// Table whose entries come from `score(i, j, k, p)` for i < j; evidence is left empty.
  static PairTable from_function(std::vector<std::string> base, std::vector<std::string> target,
                                 const std::function<double(std::size_t, std::size_t, std::size_t, std::size_t)>& score);

  const std::vector<std::string>& base() const noexcept { return base_; }
  const std::vector<std::string>& target() const noexcept { return target_; }
  std::size_t base_index(const std::string& name) const;
  std::size_t target_index(const std::string& name) const;

  /// Number of stored quadruples: C(n,2) * m * (m-1).
  std::size_t entry_count() const noexcept;

  /// Stores the entry for (b_i, b_j) -> (t_k, t_p); requires i < j and k != p.
  void set(std::size_t i, std::size_t j, std::size_t k, std::size_t p, PairSimilarity value);
  /// Stored entry; requires i < j.
  const PairSimilarity& entry(std::size_t i, std::size_t j, std::size_t k, std::size_t p) const;
  /// sim*(b_i, b_j, t_k, t_p) for any i != j, k != p, using sim*(b,b',t,t') = sim*(b',b,t',t).
  double score(std::size_t i, std::size_t j, std::size_t k, std::size_t p) const;

  bool all_zero() const;

 private:
  std::size_t slot(std::size_t i, std::size_t j, std::size_t k, std::size_t p) const;

  std::vector<std::string> base_;
  std::vector<std::string> target_;
  std::vector<PairSimilarity> entries_;
  std::vector<double> scores_;
};

/// Fills a PairTable for the two domains. Every relation set needed must be in
/// `index` (missing ones count as empty). Work is split over `threads` workers;
/// the result does not depend on the split.
PairTable score_all_pairs(const std::vector<Entity>& base, const std::vector<Entity>& target,
                          const RelationIndex& index, const PairScorer& scorer, std::size_t threads = 1);

}  // namespace relmap
