#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace relmap {

/// One retained edge of the cluster matching, labelled by cluster representatives.
struct EvidenceEdge {
  std::string base_label;
  std::string target_label;
  double weight = 0.0;
  // Member phrases realizing the cluster-edge maximum.
  std::string base_phrase;
  std::string target_phrase;

  friend bool operator==(const EvidenceEdge&, const EvidenceEdge&) = default;
};

/// Forward compares R(b1,b2) with R(t1,t2); Backward compares R(b2,b1) with R(t2,t1).
enum class Direction { Forward, Backward };

struct DirectionalEvidence {
  Direction direction = Direction::Forward;
  double score = 0.0;
  std::vector<EvidenceEdge> edges;
};

/// sim* for the correspondence (b1,b2) -> (t1,t2) together with its evidence.
struct PairSimilarity {
  std::pair<std::string, std::string> base_pair;
  std::pair<std::string, std::string> target_pair;
  double score = 0.0;
  std::array<DirectionalEvidence, 2> evidence{
      DirectionalEvidence{Direction::Forward, 0.0, {}},
      DirectionalEvidence{Direction::Backward, 0.0, {}}};
};

struct Assignment {
  std::string base;
  std::string target;

  friend auto operator<=>(const Assignment&, const Assignment&) = default;
};

/// Partial injective map from base names to target names; everything not assigned is ⊥.
/// Construction validates injectivity, functionality and the no-size-1 rule.
class Mapping {
 public:
  Mapping() = default;
  Mapping(std::vector<Assignment> pairs, const std::vector<std::string>& base_names,
          const std::vector<std::string>& target_names, double total_score);

  const std::vector<Assignment>& pairs() const noexcept { return pairs_; }
  const std::vector<std::string>& unmapped_base() const noexcept { return unmapped_base_; }
  const std::vector<std::string>& unmapped_target() const noexcept { return unmapped_target_; }
  double total_score() const noexcept { return total_score_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  /// Target of `base`, or nullptr when it maps to ⊥.
  const std::string* image(const std::string& base) const;

  /// Equality of assignment sets and unmapped sets; scores are not compared.
  bool same_assignments(const Mapping& other) const;

  friend bool operator==(const Mapping&, const Mapping&) = default;

 private:
  std::vector<Assignment> pairs_;
  std::vector<std::string> unmapped_base_;
  std::vector<std::string> unmapped_target_;
  double total_score_ = 0.0;
};

enum class CardinalityVariant {
  /// Partial injections with size != 1, the space the search actually explores.
  ExcludeSingletons,
  /// The same sum without removing the n*m single-pair mappings.
  IncludeSingletons,
};

/// Number of valid mappings between domains of size n and m (order of n, m irrelevant).
/// Throws InputError for n or m == 0 and std::overflow_error when the count exceeds 64 bits.
std::uint64_t solution_space_size(std::uint64_t n, std::uint64_t m,
                                  CardinalityVariant variant = CardinalityVariant::ExcludeSingletons);

/// n! / (n-k)!, checked.
std::uint64_t falling_factorial(std::uint64_t n, std::uint64_t k);

}  // namespace relmap
