#include "relmap/suggestion.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "relmap/clustering.hpp"
#include "relmap/detail/parallel.hpp"

namespace relmap {
namespace {

const Entity& find_entity(const std::vector<Entity>& domain, const std::string& name) {
  for (const auto& e : domain) {
    if (e.name() == name) return e;
  }
  throw InputError("unknown entity '" + name + "'");
}

void check_request(const MapResult& result, const Mapping& mapping, const std::string& unmapped) {
  if (mapping.empty()) throw InputError("suggestions need a non-empty mapping");
  const auto& free = mapping.unmapped_base();
  if (std::find(free.begin(), free.end(), unmapped) == free.end()) {
    throw InputError("'" + unmapped + "' is not an unmapped base entity");
  }
  find_entity(result.base, unmapped);
}

struct Rerun {
  std::optional<Mapping> mapping;
  double score = 0.0;
};

// Best ranked mapping of the extended problem in which `unmapped` goes to `candidate`.
Rerun rerun_with(const Engine& engine, const MapResult& result, const std::string& unmapped,
                 const std::string& candidate) {
  auto target = result.target;
  target.push_back(normalize_entity(candidate, DomainTag::Target));
  const auto extended = engine.map(result.base, std::move(target));
  for (const auto& m : extended.ranked) {
    const auto* image = m.image(unmapped);
    if (image && *image == candidate) return {m, m.total_score()};
  }
  return {};
}

}  // namespace

std::vector<std::string> harvest_candidates(const Engine& engine, const MapResult& result, const Mapping& mapping,
                                            const std::string& unmapped, const SuggestionOptions& options) {
  check_request(result, mapping, unmapped);
  const Entity& bu = find_entity(result.base, unmapped);
  std::set<std::string> targets;
  for (const auto& t : result.target) targets.insert(t.name());

  auto& snapshot = engine.snapshot();
  const auto& acq = engine.acquisition();
  std::vector<std::string> out;

  auto ask = [&](const Entity& known, const std::string& relation, HarvestDirection dir) {
    for (const auto& source : engine.sources()) {
      if (out.size() >= options.harvest_cap) return;
      if (source->kind() == SourceKind::GenerativeLm || !source->supports_entity_harvest()) continue;
      std::vector<std::string> names;
      if (auto hit = snapshot.lookup_entities(source->id(), known.name(), relation, dir)) {
        names = std::move(*hit);
      } else if (!source->requires_network() || acq.live) {
        try {
          for (const auto& raw : source->harvest_entities(known, relation, dir)) {
            auto norm = normalize_text(raw);
            if (!norm.empty()) names.push_back(std::move(norm));
          }
          snapshot.record_entities(source->id(), known.name(), relation, dir, names);
        } catch (const SourceUnavailableError& e) {
          if (acq.on_source_failure) acq.on_source_failure(source->id());
          warn(acq.warnings, "source '" + source->id() + "' unavailable while harvesting: " + e.what());
          continue;
        } catch (const ParseError& e) {
          if (acq.on_source_failure) acq.on_source_failure(source->id());
          warn(acq.warnings, "source '" + source->id() + "' sent a malformed harvest answer: " + e.what());
          continue;
        }
      } else {
        continue;
      }
      for (const auto& raw : names) {
        if (out.size() >= options.harvest_cap) return;
        try {
          auto name = normalize_entity(raw, DomainTag::Target).name();
          if (!targets.count(name)) out.push_back(std::move(name));
        } catch (const InvalidEntityError&) {
        }
      }
    }
  };

  for (const auto& a : mapping.pairs()) {
    const Entity& bi = find_entity(result.base, a.base);
    const Entity& ti = find_entity(result.target, a.target);
    for (const auto& r : result.index.get(bi, bu).relations()) ask(ti, r.text, HarvestDirection::KnownIsHead);
    for (const auto& r : result.index.get(bu, bi).relations()) ask(ti, r.text, HarvestDirection::KnownIsTail);
  }
  return out;
}

SuggestionResult suggest(const Engine& engine, const MapResult& result, const Mapping& mapping,
                         const std::string& unmapped, const SuggestionOptions& options) {
  SuggestionResult out;
  out.harvested = harvest_candidates(engine, result, mapping, unmapped, options);
  if (out.harvested.empty()) return out;

  std::vector<std::string> labels = out.harvested;
  std::sort(labels.begin(), labels.end());
  std::vector<Vector> vectors;
  vectors.reserve(labels.size());
  for (const auto& l : labels) vectors.push_back(engine.scorer().provider().embed(l));
  const auto agg = agglomerate(labels, vectors, engine.config().scoring.cluster_threshold);

  std::vector<SuggestionCandidate> clusters;
  for (std::size_t g = 0; g < agg.groups.size(); ++g) {
    if (agg.groups[g].size() < options.min_cluster_size) continue;
    SuggestionCandidate c;
    for (std::size_t i : agg.groups[g]) c.cluster_members.push_back(labels[i]);
    c.representative = labels[agg.representatives[g]];
    c.entity = c.representative;
    clusters.push_back(std::move(c));
  }

  std::vector<Rerun> reruns(clusters.size());
  detail::parallel_for(clusters.size(), engine.config().threads, [&](std::size_t k) {
    reruns[k] = rerun_with(engine, result, unmapped, clusters[k].representative);
  });
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    if (!reruns[k].mapping) continue;
    clusters[k].best_mapping = *reruns[k].mapping;
    clusters[k].score = reruns[k].score;
    out.candidates.push_back(std::move(clusters[k]));
  }
  auto by_score = [](const SuggestionCandidate& a, const SuggestionCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.representative < b.representative;
  };
  std::sort(out.candidates.begin(), out.candidates.end(), by_score);
  if (out.candidates.empty()) return out;

  // Final round over the distinct members of the winning cluster.
  auto& top = out.candidates.front();
  std::vector<std::string> members = top.cluster_members;
  members.erase(std::unique(members.begin(), members.end()), members.end());
  std::vector<Rerun> member_runs(members.size());
  detail::parallel_for(members.size(), engine.config().threads, [&](std::size_t k) {
    member_runs[k] = members[k] == top.representative ? Rerun{top.best_mapping, top.score}
                                                     : rerun_with(engine, result, unmapped, members[k]);
  });
  for (std::size_t k = 0; k < members.size(); ++k) {
    if (!member_runs[k].mapping) continue;
    const double s = member_runs[k].score;
    if (s > top.score || (s == top.score && members[k] < top.entity)) {
      top.entity = members[k];
      top.score = s;
      top.best_mapping = *member_runs[k].mapping;
    }
  }
  out.status = SuggestionStatus::Ok;
  return out;
}

}  // namespace relmap
