#include "relmap/pair_scoring.hpp"

#include <algorithm>
#include <tuple>

#include "relmap/similarity.hpp"

namespace relmap {
namespace {

void sort_edges(std::vector<MatchedEdge>& edges, const ClusterGraph& graph) {
  std::sort(edges.begin(), edges.end(), [&](const MatchedEdge& a, const MatchedEdge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return std::tie(graph.base_clusters[a.row].representative.text, graph.target_clusters[a.col].representative.text) <
           std::tie(graph.base_clusters[b.row].representative.text, graph.target_clusters[b.col].representative.text);
  });
}

}  // namespace

PairScorer::PairScorer(std::shared_ptr<EmbeddingProvider> provider, std::shared_ptr<const Stoplist> stoplist,
                       ScoringParams params, WarningSink warnings)
    : provider_(std::move(provider)),
      stoplist_(stoplist ? std::move(stoplist) : std::make_shared<const Stoplist>()),
      params_(params),
      warnings_(std::move(warnings)) {
  if (!provider_) throw ConfigError("pair scorer needs an embedding provider");
  if (params_.top_k < 1) throw ConfigError("top_k must be at least 1");
  if (!(params_.sim_threshold >= 0.0 && params_.sim_threshold <= 1.0)) {
    throw ConfigError("similarity threshold must lie in [0, 1]");
  }
  if (!(params_.cluster_threshold > 0.0 && params_.cluster_threshold <= 1.0)) {
    throw ConfigError("cluster distance threshold must lie in (0, 1]");
  }
}

std::shared_ptr<const std::vector<RelationCluster>> PairScorer::clusters(const RelationSet& set,
                                                                         DomainTag side) const {
  std::vector<std::string> key;
  key.reserve(set.size() + 1);
  key.emplace_back(to_string(side));
  for (const auto& p : set.relations()) key.push_back(p.text + '\x1f' + p.source);
  {
    std::shared_lock lock(cache_mutex_);
    if (auto it = cluster_cache_.find(key); it != cluster_cache_.end()) return it->second;
  }
  auto computed = std::make_shared<const std::vector<RelationCluster>>(
      cluster_relations(set.relations(), *provider_, params_.cluster_threshold, side, warnings_));
  std::unique_lock lock(cache_mutex_);
  return cluster_cache_.emplace(std::move(key), std::move(computed)).first->second;
}

ClusterGraph PairScorer::cluster_graph(const RelationSet& base, const RelationSet& target) const {
  ClusterGraph g;
  g.base_clusters = *clusters(base, DomainTag::Base);
  g.target_clusters = *clusters(target, DomainTag::Target);
  g.weights.assign(g.base_clusters.size(), std::vector<double>(g.target_clusters.size(), 0.0));
  g.argmax.assign(g.base_clusters.size(), std::vector<std::pair<std::string, std::string>>(g.target_clusters.size()));
  for (std::size_t i = 0; i < g.base_clusters.size(); ++i) {
    for (std::size_t j = 0; j < g.target_clusters.size(); ++j) {
      double best = 0.0;
      for (const auto& a : g.base_clusters[i].members) {
        for (const auto& b : g.target_clusters[j].members) {
          const double s = phrase_similarity(a.text, b.text, *provider_, *stoplist_, params_.sim_threshold);
          if (s > best) {
            best = s;
            g.argmax[i][j] = {a.text, b.text};
          }
        }
      }
      g.weights[i][j] = best;
    }
  }
  return g;
}

std::vector<MatchedEdge> retain_top_k(std::vector<MatchedEdge> matching, const ClusterGraph& graph,
                                      std::size_t top_k) {
  sort_edges(matching, graph);
  if (matching.size() > top_k) matching.resize(top_k);
  return matching;
}

DirectionalDetail PairScorer::directional_detail(const RelationSet& base, const RelationSet& target,
                                                 Direction direction) const {
  DirectionalDetail d;
  d.evidence.direction = direction;
  if (base.empty() || target.empty()) return d;
  d.graph = cluster_graph(base, target);
  d.matching = max_weight_matching(d.graph.weights);
  sort_edges(d.matching, d.graph);
  d.matching_weight = matching_weight(d.matching);
  for (const auto& e : retain_top_k(d.matching, d.graph, params_.top_k)) {
    d.evidence.score += e.weight;
    d.evidence.edges.push_back(EvidenceEdge{d.graph.base_clusters[e.row].representative.text,
                                            d.graph.target_clusters[e.col].representative.text, e.weight,
                                            d.graph.argmax[e.row][e.col].first,
                                            d.graph.argmax[e.row][e.col].second});
  }
  return d;
}

DirectionalEvidence PairScorer::directional_sim(const RelationSet& base, const RelationSet& target,
                                                Direction direction) const {
  return directional_detail(base, target, direction).evidence;
}

PairSimilarity PairScorer::sim_star(const Entity& b1, const Entity& b2, const Entity& t1, const Entity& t2,
                                    const RelationIndex& index) const {
  if (b1 == b2 || t1 == t2) throw InputError("sim* needs two distinct entities on each side");
  PairSimilarity out;
  out.base_pair = {b1.name(), b2.name()};
  out.target_pair = {t1.name(), t2.name()};
  out.evidence[0] = directional_sim(index.get(b1, b2), index.get(t1, t2), Direction::Forward);
  out.evidence[1] = directional_sim(index.get(b2, b1), index.get(t2, t1), Direction::Backward);
  out.score = out.evidence[0].score + out.evidence[1].score;
  return out;
}

}  // namespace relmap
