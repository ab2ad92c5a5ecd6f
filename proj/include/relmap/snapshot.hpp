#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

namespace relmap {

/// Which side of a triple the known entity occupies when harvesting new entities.
enum class HarvestDirection {
  KnownIsHead,  // (known, relation, ?)
  KnownIsTail,  // (?, relation, known)
};

/// Persisted dump of every source answer the engine has seen, keyed by
/// (source id, head, tail). Misses are stored as empty lists so a replay never
/// needs to reach the source again. Entries are never overwritten.
///
/// File format (UTF-8, one JSON object per line):
///   {"format":"relmap-snapshot","version":1,"created_at":"..."}
///   {"source":s,"head":h,"tail":t,"relations":[...]}
///   {"source":s,"known":k,"relation":r,"direction":"head"|"tail","entities":[...]}
///
/// Safe for concurrent readers with serialized writers.
class Snapshot {
 public:
  static constexpr int kFormatVersion = 1;

  Snapshot();
  explicit Snapshot(std::string created_at);
  Snapshot(const Snapshot& other);
  Snapshot& operator=(const Snapshot& other);

  /// Throws ConfigError if the file is missing, ParseError on malformed records
  /// or an unsupported version.
  static Snapshot load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  std::string serialize() const;

  std::optional<std::vector<std::string>> lookup(const std::string& source, const std::string& head,
                                                 const std::string& tail) const;
  /// Returns false (and keeps the old value) if the key is already present.
  bool record(const std::string& source, const std::string& head, const std::string& tail,
              std::vector<std::string> relations);

  std::optional<std::vector<std::string>> lookup_entities(const std::string& source,
                                                          const std::string& known,
                                                          const std::string& relation,
                                                          HarvestDirection direction) const;
  bool record_entities(const std::string& source, const std::string& known,
                       const std::string& relation, HarvestDirection direction,
                       std::vector<std::string> entities);

  /// True if `name` appears as head or tail of any relation entry of one of `sources`
  /// (all sources when the set is empty).
  bool mentions(const std::string& name, const std::set<std::string>& sources = {}) const;

  std::set<std::string> source_ids() const;
  std::size_t relation_entry_count() const;
  std::size_t entity_entry_count() const;
  const std::string& created_at() const noexcept { return created_at_; }

 private:
  using RelationKey = std::tuple<std::string, std::string, std::string>;
  using EntityKey = std::tuple<std::string, std::string, std::string, HarvestDirection>;

  std::string created_at_;
  mutable std::shared_mutex mutex_;
  std::map<RelationKey, std::vector<std::string>> relations_;
  std::map<EntityKey, std::vector<std::string>> entities_;
};

}  // namespace relmap
