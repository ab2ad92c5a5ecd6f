#pragma once

#include <vector>

namespace relmap {

struct MatchedEdge {
  std::size_t row;
  std::size_t col;
  double weight;
};

/// Maximum-weight bipartite matching on a dense rows x cols weight matrix
/// (rows may differ in count from cols; entries must be >= 0). Exact
/// Kuhn-Munkres on the zero-padded square problem. Edges of weight 0 are not
/// reported. The result is ordered by row.
std::vector<MatchedEdge> max_weight_matching(const std::vector<std::vector<double>>& weights);

/// Sum of the reported edge weights.
double matching_weight(const std::vector<MatchedEdge>& edges);

}  // namespace relmap
