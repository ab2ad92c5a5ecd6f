#include "relmap/snapshot.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "relmap/errors.hpp"

namespace relmap {
namespace {

using json = nlohmann::json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view direction_tag(HarvestDirection d) {
  return d == HarvestDirection::KnownIsHead ? "head" : "tail";
}

}  // namespace

Snapshot::Snapshot() : created_at_(utc_now()) {}

Snapshot::Snapshot(std::string created_at) : created_at_(std::move(created_at)) {}

Snapshot::Snapshot(const Snapshot& other) {
  std::shared_lock lock(other.mutex_);
  created_at_ = other.created_at_;
  relations_ = other.relations_;
  entities_ = other.entities_;
}

Snapshot& Snapshot::operator=(const Snapshot& other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mutex_, other.mutex_);
  created_at_ = other.created_at_;
  relations_ = other.relations_;
  entities_ = other.entities_;
  return *this;
}

Snapshot Snapshot::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open snapshot file " + path.string());

  std::string line;
  std::size_t line_no = 0;
  std::optional<Snapshot> snap;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(where + ": " + e.what());
    }
    if (!snap) {
      if (!rec.contains("format") || rec["format"] != "relmap-snapshot") {
        throw ParseError(where + ": missing snapshot header line");
      }
      const int version = rec.value("version", 0);
      if (version != kFormatVersion) {
        throw ParseError(where + ": unsupported snapshot version " + std::to_string(version));
      }
      snap.emplace(rec.value("created_at", std::string{}));
      continue;
    }
    try {
      if (rec.contains("relations")) {
        snap->record(rec.at("source").get<std::string>(), rec.at("head").get<std::string>(),
                     rec.at("tail").get<std::string>(),
                     rec.at("relations").get<std::vector<std::string>>());
      } else if (rec.contains("entities")) {
        const auto dir = rec.at("direction").get<std::string>();
        if (dir != "head" && dir != "tail") throw ParseError(where + ": bad direction '" + dir + "'");
        snap->record_entities(rec.at("source").get<std::string>(), rec.at("known").get<std::string>(),
                              rec.at("relation").get<std::string>(),
                              dir == "head" ? HarvestDirection::KnownIsHead
                                            : HarvestDirection::KnownIsTail,
                              rec.at("entities").get<std::vector<std::string>>());
      } else {
        throw ParseError(where + ": record has neither relations nor entities");
      }
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (!snap) throw ParseError(path.string() + ": empty snapshot file");
  return std::move(*snap);
}

std::string Snapshot::serialize() const {
  std::shared_lock lock(mutex_);
  std::ostringstream out;
  out << json{{"format", "relmap-snapshot"}, {"version", kFormatVersion}, {"created_at", created_at_}}
             .dump()
      << '\n';
  for (const auto& [key, rels] : relations_) {
    const auto& [source, head, tail] = key;
    out << json{{"source", source}, {"head", head}, {"tail", tail}, {"relations", rels}}.dump() << '\n';
  }
  for (const auto& [key, ents] : entities_) {
    const auto& [source, known, relation, dir] = key;
    out << json{{"source", source},
                {"known", known},
                {"relation", relation},
                {"direction", direction_tag(dir)},
                {"entities", ents}}
               .dump()
        << '\n';
  }
  return out.str();
}

void Snapshot::save(const std::filesystem::path& path) const {
  const auto text = serialize();
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write snapshot file " + path.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

std::optional<std::vector<std::string>> Snapshot::lookup(const std::string& source,
                                                         const std::string& head,
                                                         const std::string& tail) const {
  std::shared_lock lock(mutex_);
  auto it = relations_.find({source, head, tail});
  if (it == relations_.end()) return std::nullopt;
  return it->second;
}

bool Snapshot::record(const std::string& source, const std::string& head, const std::string& tail,
                      std::vector<std::string> relations) {
  std::unique_lock lock(mutex_);
  return relations_.emplace(RelationKey{source, head, tail}, std::move(relations)).second;
}

std::optional<std::vector<std::string>> Snapshot::lookup_entities(const std::string& source,
                                                                  const std::string& known,
                                                                  const std::string& relation,
                                                                  HarvestDirection direction) const {
  std::shared_lock lock(mutex_);
  auto it = entities_.find({source, known, relation, direction});
  if (it == entities_.end()) return std::nullopt;
  return it->second;
}

bool Snapshot::record_entities(const std::string& source, const std::string& known,
                               const std::string& relation, HarvestDirection direction,
                               std::vector<std::string> entities) {
  std::unique_lock lock(mutex_);
  return entities_.emplace(EntityKey{source, known, relation, direction}, std::move(entities)).second;
}

bool Snapshot::mentions(const std::string& name, const std::set<std::string>& sources) const {
  std::shared_lock lock(mutex_);
  for (const auto& [key, rels] : relations_) {
    const auto& [source, head, tail] = key;
    if (!sources.empty() && !sources.count(source)) continue;
    if (head == name || tail == name) return true;
  }
  return false;
}

std::set<std::string> Snapshot::source_ids() const {
  std::shared_lock lock(mutex_);
  std::set<std::string> ids;
  for (const auto& [key, rels] : relations_) ids.insert(std::get<0>(key));
  for (const auto& [key, ents] : entities_) ids.insert(std::get<0>(key));
  return ids;
}

std::size_t Snapshot::relation_entry_count() const {
  std::shared_lock lock(mutex_);
  return relations_.size();
}

std::size_t Snapshot::entity_entry_count() const {
  std::shared_lock lock(mutex_);
  return entities_.size();
}

}  // namespace relmap
