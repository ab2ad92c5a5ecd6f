#include "relmap/matching.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace relmap {

std::vector<MatchedEdge> max_weight_matching(const std::vector<std::vector<double>>& weights) {
  const std::size_t rows = weights.size();
  const std::size_t cols = rows ? weights.front().size() : 0;
  for (const auto& r : weights) {
    if (r.size() != cols) throw std::invalid_argument("weight matrix is ragged");
    for (double w : r) {
      if (!(w >= 0.0)) throw std::invalid_argument("weight matrix has a negative or NaN entry");
    }
  }
  if (rows == 0 || cols == 0) return {};

  // Minimization over cost = -weight, 1-based potentials (classic O(n^3) form).
  const std::size_t n = std::max(rows, cols);
  auto cost = [&](std::size_t i, std::size_t j) {
    return (i < rows && j < cols) ? -weights[i][j] : 0.0;
  };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<MatchedEdge> out;
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = p[j];
    if (i == 0 || i > rows || j > cols) continue;
    const double w = weights[i - 1][j - 1];
    if (w > 0.0) out.push_back({i - 1, j - 1, w});
  }
  std::sort(out.begin(), out.end(), [](const MatchedEdge& a, const MatchedEdge& b) { return a.row < b.row; });
  return out;
}

double matching_weight(const std::vector<MatchedEdge>& edges) {
  double total = 0.0;
  for (const auto& e : edges) total += e.weight;
  return total;
}

}  // namespace relmap
