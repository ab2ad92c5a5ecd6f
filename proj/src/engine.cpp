#include "relmap/engine.hpp"

namespace relmap {

Engine::Engine(SourceList sources, std::shared_ptr<Snapshot> snapshot, std::shared_ptr<EmbeddingProvider> provider,
               std::shared_ptr<const Stoplist> stoplist, SearchConfig config, AcquisitionOptions acquisition)
    : sources_(std::move(sources)),
      snapshot_(snapshot ? std::move(snapshot) : std::make_shared<Snapshot>()),
      provider_(std::move(provider)),
      stoplist_(stoplist ? std::move(stoplist) : std::make_shared<const Stoplist>()),
      config_(config),
      acquisition_(std::move(acquisition)),
      scorer_(provider_, stoplist_, config.scoring, acquisition_.warnings) {}

Engine Engine::with_sources(SourceList sources) const {
  return Engine(std::move(sources), snapshot_, provider_, stoplist_, config_, acquisition_);
}

RelationIndex Engine::relations(const std::vector<Entity>& domain) const {
  return build_relation_index(domain, sources_, *snapshot_, acquisition_, config_.threads);
}

MapResult Engine::map(const std::vector<std::string>& base, const std::vector<std::string>& target) const {
  return map(make_domain(base, DomainTag::Base), make_domain(target, DomainTag::Target));
}

MapResult Engine::map(std::vector<Entity> base, std::vector<Entity> target) const {
  if (base.size() < 2 || target.size() < 2) throw InputError("each domain needs at least two entities");
  MapResult r;
  r.index = relations(base);
  const auto target_index = relations(target);
  for (const auto& [key, set] : target_index.sets()) r.index.insert(set);
  r.table = score_all_pairs(base, target, r.index, scorer_, config_.threads);
  r.ranked = beam_search(r.table, config_);
  r.base = std::move(base);
  r.target = std::move(target);
  return r;
}

Explanation Engine::explain(const std::string& b1, const std::string& b2, const std::string& t1,
                            const std::string& t2) const {
  const auto eb1 = normalize_entity(b1, DomainTag::Base), eb2 = normalize_entity(b2, DomainTag::Base);
  const auto et1 = normalize_entity(t1, DomainTag::Target), et2 = normalize_entity(t2, DomainTag::Target);
  if (eb1 == eb2 || et1 == et2) throw InputError("explain needs two distinct entities on each side");
  auto index = relations({eb1, eb2});
  const auto target_index = relations({et1, et2});
  for (const auto& [key, set] : target_index.sets()) index.insert(set);

  Explanation x{scorer_.sim_star(eb1, eb2, et1, et2, index),
                scorer_.directional_detail(index.get(eb1, eb2), index.get(et1, et2), Direction::Forward),
                scorer_.directional_detail(index.get(eb2, eb1), index.get(et2, et1), Direction::Backward),
                index.get(eb1, eb2),
                index.get(et1, et2),
                index.get(eb2, eb1),
                index.get(et2, et1)};
  return x;
}

}  // namespace relmap
