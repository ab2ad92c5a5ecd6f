#include "relmap/stoplist.hpp"

#include <cstdlib>
#include <fstream>

#include "relmap/entity.hpp"
#include "relmap/errors.hpp"

#ifndef RELMAP_DATA_DIR
#define RELMAP_DATA_DIR "data"
#endif

namespace relmap {

Stoplist::Stoplist(std::initializer_list<std::string_view> ngrams) {
  for (auto g : ngrams) insert(g);
}

Stoplist Stoplist::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read stoplist " + path.string());
  Stoplist out;
  std::string line;
  while (std::getline(in, line)) {
    const auto norm = normalize_text(line);
    if (norm.empty() || norm.front() == '#') continue;
    out.ngrams_.insert(norm);
  }
  return out;
}

Stoplist Stoplist::load_default() { return load(default_data_dir() / "stoplist.txt"); }

void Stoplist::insert(std::string_view ngram) {
  auto norm = normalize_text(ngram);
  if (!norm.empty()) ngrams_.insert(std::move(norm));
}

bool Stoplist::contains(std::string_view phrase) const {
  return ngrams_.find(normalize_text(phrase)) != ngrams_.end();
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("RELMAP_DATA_DIR"); env && *env) return env;
  return RELMAP_DATA_DIR;
}

}  // namespace relmap
