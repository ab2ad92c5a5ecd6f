#include "relmap/triple_store.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "relmap/entity.hpp"
#include "relmap/errors.hpp"

namespace relmap {
namespace {

constexpr std::string_view kIndexMagic = "relmap-triple-index";

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string store_stamp(const std::filesystem::path& path) {
  const auto size = std::filesystem::file_size(path);
  const auto mtime = std::filesystem::last_write_time(path).time_since_epoch().count();
  return std::to_string(size) + ":" + std::to_string(mtime);
}

}  // namespace

std::optional<Triple> parse_triple_line(const std::string& raw, const std::string& where) {
  std::string line = raw;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') return std::nullopt;
  auto fields = split_tabs(line);
  if (fields.size() < 3 || fields.size() > 4) {
    throw ConfigError(where + ": expected subject<TAB>predicate<TAB>object[<TAB>score]");
  }
  Triple t{normalize_text(fields[0]), normalize_phrase(fields[1]), normalize_text(fields[2]),
           std::nullopt};
  if (t.subject.empty() || t.predicate.empty() || t.object.empty()) {
    throw ConfigError(where + ": empty triple field");
  }
  if (fields.size() == 4) {
    double score = 0.0;
    const auto& s = fields[3];
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), score);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ConfigError(where + ": score '" + s + "' is not a number");
    }
    t.score = score;
  }
  return t;
}

TripleStore::TripleStore(std::filesystem::path path) : path_(std::move(path)) {
  if (!std::filesystem::is_regular_file(path_)) {
    throw ConfigError("triple store not found: " + path_.string());
  }
  const auto stamp = store_stamp(path_);
  if (!try_load_index(stamp)) build_index(stamp);
  stream_.open(path_, std::ios::binary);
  if (!stream_) throw ConfigError("cannot open triple store " + path_.string());
}

std::filesystem::path TripleStore::index_path() const {
  return std::filesystem::path(path_.string() + ".idx");
}

bool TripleStore::try_load_index(const std::string& stamp) {
  std::ifstream in(index_path());
  if (!in) return false;
  std::string header;
  if (!std::getline(in, header)) return false;
  const auto head = split_tabs(header);
  if (head.size() != 4 || head[0] != kIndexMagic || head[1] != "1" || head[2] != stamp) return false;

  std::unordered_map<std::string, Offsets> subjects;
  std::unordered_map<std::string, Offsets> objects;
  std::string line;
  while (std::getline(in, line)) {
    const auto fields = split_tabs(line);
    if (fields.size() != 3 || (fields[0] != "S" && fields[0] != "O")) return false;
    Offsets offsets;
    std::istringstream list(fields[2]);
    std::string item;
    while (std::getline(list, item, ',')) {
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc{}) return false;
      offsets.push_back(v);
    }
    (fields[0] == "S" ? subjects : objects)[fields[1]] = std::move(offsets);
  }
  std::size_t count = 0;
  try {
    count = std::stoull(head[3]);
  } catch (const std::exception&) {
    return false;
  }
  by_subject_ = std::move(subjects);
  by_object_ = std::move(objects);
  triple_count_ = count;
  index_reused_ = true;
  return true;
}

void TripleStore::build_index(const std::string& stamp) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw ConfigError("cannot open triple store " + path_.string());
  std::string line;
  std::size_t line_no = 0;
  std::uint64_t offset = 0;
  while (true) {
    const auto pos = static_cast<std::uint64_t>(in.tellg());
    if (!std::getline(in, line)) break;
    ++line_no;
    offset = pos;
    auto triple = parse_triple_line(line, path_.string() + ":" + std::to_string(line_no));
    if (!triple) continue;
    by_subject_[triple->subject].push_back(offset);
    by_object_[triple->object].push_back(offset);
    ++triple_count_;
  }

  // The sidecar is an optimization; an unwritable directory only costs a rescan next time.
  std::ofstream out(index_path(), std::ios::trunc);
  if (!out) return;
  out << kIndexMagic << "\t1\t" << stamp << '\t' << triple_count_ << '\n';
  auto dump = [&out](char tag, const std::unordered_map<std::string, Offsets>& table) {
    std::vector<const std::string*> keys;
    for (const auto& [k, v] : table) keys.push_back(&k);
    std::sort(keys.begin(), keys.end(), [](auto* a, auto* b) { return *a < *b; });
    for (const auto* k : keys) {
      out << tag << '\t' << *k << '\t';
      const auto& offs = table.at(*k);
      for (std::size_t i = 0; i < offs.size(); ++i) out << (i ? "," : "") << offs[i];
      out << '\n';
    }
  };
  dump('S', by_subject_);
  dump('O', by_object_);
}

std::vector<Triple> TripleStore::read_at(const Offsets& offsets) const {
  std::vector<Triple> out;
  std::lock_guard lock(read_mutex_);
  std::string line;
  for (auto off : offsets) {
    stream_.clear();
    stream_.seekg(static_cast<std::streamoff>(off));
    if (!std::getline(stream_, line)) {
      throw ConfigError("triple store changed underneath its index: " + path_.string());
    }
    if (auto t = parse_triple_line(line, path_.string() + "@" + std::to_string(off))) {
      out.push_back(std::move(*t));
    }
  }
  return out;
}

std::vector<Triple> TripleStore::by_subject(const std::string& normalized_subject) const {
  auto it = by_subject_.find(normalized_subject);
  if (it == by_subject_.end()) return {};
  return read_at(it->second);
}

std::vector<Triple> TripleStore::by_object(const std::string& normalized_object) const {
  auto it = by_object_.find(normalized_object);
  if (it == by_object_.end()) return {};
  return read_at(it->second);
}

}  // namespace relmap
