#include "relmap/clustering.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

namespace relmap {
namespace {

struct Group {
  std::vector<std::size_t> members;
  std::size_t representative = 0;
  bool alive = true;
};

std::size_t pick_representative(const std::vector<std::size_t>& members, const std::vector<std::vector<double>>& cos,
                                std::span<const std::string> labels) {
  if (members.size() == 1) return members.front();
  std::size_t best = members.front();
  double best_mean = -2.0;
  for (std::size_t i : members) {
    double sum = 0.0;
    for (std::size_t j : members) {
      if (j != i) sum += cos[i][j];
    }
    const double mean = sum / static_cast<double>(members.size() - 1);
    if (mean > best_mean || (mean == best_mean && (labels[i] < labels[best] || (labels[i] == labels[best] && i < best)))) {
      best = i;
      best_mean = mean;
    }
  }
  return best;
}

}  // namespace

Agglomeration agglomerate(std::span<const std::string> labels, std::span<const Vector> vectors,
                          double distance_threshold) {
  if (labels.size() != vectors.size()) throw std::logic_error("agglomerate: labels and vectors differ in length");
  const std::size_t n = labels.size();
  Agglomeration out;
  if (n == 0) return out;

  std::vector<std::vector<double>> cos(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) cos[i][j] = cos[j][i] = cosine(vectors[i], vectors[j]);
  }

  std::vector<Group> groups(n);
  // link[a][b]: sum of pairwise cosines between groups a and b.
  std::vector<std::vector<double>> link = cos;
  for (std::size_t i = 0; i < n; ++i) groups[i] = Group{{i}, i, true};

  for (;;) {
    std::size_t best_a = n, best_b = n;
    double best_d = 0.0;
    std::pair<std::string_view, std::string_view> best_key;
    for (std::size_t a = 0; a < n; ++a) {
      if (!groups[a].alive) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (!groups[b].alive) continue;
        const double mean =
            link[a][b] / static_cast<double>(groups[a].members.size() * groups[b].members.size());
        const double d = 1.0 - mean;
        if (d > distance_threshold) continue;
        std::string_view la = labels[groups[a].representative], lb = labels[groups[b].representative];
        auto key = la <= lb ? std::make_pair(la, lb) : std::make_pair(lb, la);
        if (best_a == n || d < best_d || (d == best_d && key < best_key)) {
          best_a = a;
          best_b = b;
          best_d = d;
          best_key = key;
        }
      }
    }
    if (best_a == n) break;

    auto& ga = groups[best_a];
    auto& gb = groups[best_b];
    ga.members.insert(ga.members.end(), gb.members.begin(), gb.members.end());
    std::sort(ga.members.begin(), ga.members.end());
    gb.alive = false;
    for (std::size_t c = 0; c < n; ++c) {
      if (c == best_a || !groups[c].alive) continue;
      link[best_a][c] += link[best_b][c];
      link[c][best_a] = link[best_a][c];
    }
    ga.representative = pick_representative(ga.members, cos, labels);
  }

  std::vector<std::size_t> order;
  for (std::size_t g = 0; g < n; ++g) {
    if (groups[g].alive) order.push_back(g);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::tie(labels[groups[x].representative], groups[x].representative) <
           std::tie(labels[groups[y].representative], groups[y].representative);
  });
  for (std::size_t g : order) {
    out.groups.push_back(groups[g].members);
    out.representatives.push_back(groups[g].representative);
  }
  return out;
}

std::vector<RelationCluster> cluster_relations(std::span<const RelationPhrase> phrases, EmbeddingProvider& provider,
                                               double distance_threshold, DomainTag side,
                                               const WarningSink& warnings) {
  if (!(distance_threshold > 0.0 && distance_threshold <= 1.0)) {
    throw InputError("cluster distance threshold must lie in (0, 1]");
  }
  std::set<std::string> seen;
  std::vector<RelationPhrase> kept;
  std::vector<std::string> labels;
  std::vector<Vector> vectors;
  for (const auto& p : phrases) {
    if (!seen.insert(p.text).second) throw InputError("duplicate relation phrase '" + p.text + "'");
    try {
      vectors.push_back(provider.embed(p.text));
    } catch (const EmbeddingUnavailableError& e) {
      warn(warnings, "dropping relation '" + p.text + "': " + e.what());
      continue;
    }
    kept.push_back(p);
    labels.push_back(p.text);
  }

  const auto agg = agglomerate(labels, vectors, distance_threshold);
  std::vector<RelationCluster> out;
  out.reserve(agg.groups.size());
  for (std::size_t g = 0; g < agg.groups.size(); ++g) {
    RelationCluster c;
    c.side = side;
    for (std::size_t i : agg.groups[g]) c.members.push_back(kept[i]);
    std::sort(c.members.begin(), c.members.end(),
              [](const RelationPhrase& x, const RelationPhrase& y) { return x.text < y.text; });
    c.representative = kept[agg.representatives[g]];
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace relmap
