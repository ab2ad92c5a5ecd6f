#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace relmap {

struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;
  std::optional<double> score;
};

/// Read-only (subject, predicate, object[, score]) store backed by a TSV file.
/// Subjects and objects are indexed by normalized text in a sidecar file
/// `<store>.idx`, built on first open and reused while the store is unchanged.
class TripleStore {
 public:
  /// Throws ConfigError if the file is missing or a line is malformed.
  explicit TripleStore(std::filesystem::path path);

  std::vector<Triple> by_subject(const std::string& normalized_subject) const;
  std::vector<Triple> by_object(const std::string& normalized_object) const;

  std::size_t size() const noexcept { return triple_count_; }
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path index_path() const;
  bool index_was_reused() const noexcept { return index_reused_; }

 private:
  using Offsets = std::vector<std::uint64_t>;

  bool try_load_index(const std::string& stamp);
  void build_index(const std::string& stamp);
  std::vector<Triple> read_at(const Offsets& offsets) const;

  std::filesystem::path path_;
  std::unordered_map<std::string, Offsets> by_subject_;
  std::unordered_map<std::string, Offsets> by_object_;
  std::size_t triple_count_ = 0;
  bool index_reused_ = false;
  mutable std::mutex read_mutex_;
  mutable std::ifstream stream_;
};

/// Parses one store line. Returns nullopt for blank and '#' comment lines;
/// throws ConfigError (mentioning `where`) for malformed ones.
std::optional<Triple> parse_triple_line(const std::string& line, const std::string& where);

}  // namespace relmap
