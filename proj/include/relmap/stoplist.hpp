#pragma once

#include <filesystem>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>

namespace relmap {

/// Frequent, non-informative n-grams. Entries are stored normalized
/// (lowercase, single-spaced) and lookups normalize their argument.
class Stoplist {
 public:
  Stoplist() = default;
  Stoplist(std::initializer_list<std::string_view> ngrams);

  /// One n-gram per line; blank lines and lines starting with '#' are skipped.
  /// Throws ConfigError when the file cannot be read.
  static Stoplist load(const std::filesystem::path& path);
  /// The shipped 500-entry list.
  static Stoplist load_default();

  void insert(std::string_view ngram);
  bool contains(std::string_view phrase) const;
  std::size_t size() const { return ngrams_.size(); }
  const std::set<std::string, std::less<>>& ngrams() const { return ngrams_; }

 private:
  std::set<std::string, std::less<>> ngrams_;
};

std::filesystem::path default_data_dir();

}  // namespace relmap
