#include "relmap/acquisition.hpp"

#include <algorithm>
#include <optional>
#include <mutex>

#include "relmap/detail/parallel.hpp"

namespace relmap {

RelationSet extract_relations(const Entity& head, const Entity& tail,
                              std::span<const std::shared_ptr<RelationSource>> sources, Snapshot& snapshot,
                              const AcquisitionOptions& options) {
  if (head == tail) throw InputError("cannot extract relations of '" + head.name() + "' with itself");

  auto normalize_capped = [&](const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& text : raw) {
      if (out.size() >= options.per_source_cap) break;
      std::string norm = normalize_phrase(text);
      if (norm.empty() || std::find(out.begin(), out.end(), norm) != out.end()) continue;
      out.push_back(std::move(norm));
    }
    return out;
  };

  std::vector<RelationPhrase> phrases;
  for (const auto& source : sources) {
    std::vector<std::string> texts;
    if (auto cached = snapshot.lookup(source->id(), head.name(), tail.name())) {
      texts = std::move(*cached);
    } else if (!source->requires_network() || options.live) {
      try {
        auto answer = source->query(head, tail);
        texts = normalize_capped(answer.forward);
        snapshot.record(source->id(), head.name(), tail.name(), texts);
        if (answer.reverse) {
          snapshot.record(source->id(), tail.name(), head.name(), normalize_capped(*answer.reverse));
        }
      } catch (const SourceUnavailableError& e) {
        if (options.on_source_failure) options.on_source_failure(source->id());
        warn(options.warnings, "source '" + source->id() + "' unavailable for (" + head.name() + ", " +
                                   tail.name() + "): " + e.what());
        continue;
      } catch (const ParseError& e) {
        if (options.on_source_failure) options.on_source_failure(source->id());
        warn(options.warnings, "source '" + source->id() + "' sent a malformed response for (" +
                                   head.name() + ", " + tail.name() + "): " + e.what());
        continue;
      }
    } else {
      warn(options.warnings, "snapshot miss: source '" + source->id() + "' has no entry for (" +
                                 head.name() + ", " + tail.name() + ")");
      continue;
    }
    for (const auto& text : texts) {
      if (auto p = make_phrase(text, source->id())) phrases.push_back(std::move(*p));
    }
  }
  return RelationSet(head, tail, std::move(phrases));
}

void RelationIndex::insert(RelationSet set) {
  auto key = std::make_pair(set.head().name(), set.tail().name());
  sets_.insert_or_assign(std::move(key), std::move(set));
}

const RelationSet* RelationIndex::find(const std::string& head, const std::string& tail) const {
  auto it = sets_.find({head, tail});
  return it == sets_.end() ? nullptr : &it->second;
}

const RelationSet& RelationIndex::get(const Entity& head, const Entity& tail) const {
  if (const auto* found = find(head.name(), tail.name())) return *found;
  auto key = std::make_pair(head.name(), tail.name());
  std::lock_guard lock(*empties_mutex_);
  auto it = empties_.find(key);
  if (it == empties_.end()) it = empties_.emplace(key, RelationSet(head, tail)).first;
  return it->second;
}

RelationIndex build_relation_index(const std::vector<Entity>& domain,
                                   std::span<const std::shared_ptr<RelationSource>> sources, Snapshot& snapshot,
                                   const AcquisitionOptions& options, std::size_t threads) {
  std::vector<std::pair<std::size_t, std::size_t>> forward_pairs;
  std::vector<std::pair<std::size_t, std::size_t>> reverse_pairs;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    for (std::size_t j = i + 1; j < domain.size(); ++j) {
      forward_pairs.emplace_back(i, j);
      reverse_pairs.emplace_back(j, i);
    }
  }
  std::vector<RelationSet> results;
  for (const auto* phase : {&forward_pairs, &reverse_pairs}) {
    const auto& pairs = *phase;
    std::vector<std::optional<RelationSet>> slots(pairs.size());
    detail::parallel_for(pairs.size(), threads, [&](std::size_t k) {
      slots[k] = extract_relations(domain[pairs[k].first], domain[pairs[k].second], sources, snapshot, options);
    });
    for (auto& slot : slots) results.push_back(std::move(*slot));
  }

  RelationIndex index;
  for (auto& r : results) index.insert(std::move(r));
  return index;
}

}  // namespace relmap
