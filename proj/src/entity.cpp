#include "relmap/entity.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

#include "relmap/errors.hpp"

namespace relmap {

std::string_view to_string(DomainTag tag) {
  return tag == DomainTag::Base ? "BASE" : "TARGET";
}

std::string normalize_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string normalize_phrase(std::string_view raw) {
  std::string text = normalize_text(raw);
  auto is_edge_punct = [](unsigned char c) { return std::ispunct(c) != 0; };
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && is_edge_punct(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && is_edge_punct(static_cast<unsigned char>(text[end - 1]))) --end;
  // Stripping punctuation can expose whitespace ("the sun ." -> "the sun ").
  return normalize_text(std::string_view(text).substr(begin, end - begin));
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Inflects the last word only; "solar system" -> "solar systems".
std::vector<std::string> naive_variants(const std::string& name) {
  const auto split = name.find_last_of(' ');
  const std::string stem = split == std::string::npos ? std::string{} : name.substr(0, split + 1);
  const std::string word = split == std::string::npos ? name : name.substr(split + 1);

  std::vector<std::string> variants;
  if (ends_with(word, "s") && !ends_with(word, "ss") && word.size() > 1) {
    variants.push_back(stem + word.substr(0, word.size() - 1));
  } else if (ends_with(word, "s") || ends_with(word, "x") || ends_with(word, "z") ||
             ends_with(word, "ch") || ends_with(word, "sh")) {
    variants.push_back(stem + word + "es");
  } else {
    variants.push_back(stem + word + "s");
  }
  return variants;
}

}  // namespace

Entity normalize_entity(std::string_view raw, DomainTag domain) {
  std::string name = normalize_text(raw);
  if (name.empty()) {
    throw InvalidEntityError("entity name is empty after normalization: '" + std::string(raw) + "'");
  }
  std::vector<std::string> forms{name};
  for (auto& v : naive_variants(name)) {
    if (std::find(forms.begin(), forms.end(), v) == forms.end()) forms.push_back(std::move(v));
  }
  return Entity(std::move(name), std::move(forms), domain);
}

std::vector<Entity> make_domain(const std::vector<std::string>& raw_names, DomainTag domain) {
  std::vector<Entity> out;
  std::set<std::string> seen;
  for (const auto& raw : raw_names) {
    Entity e = normalize_entity(raw, domain);
    if (!seen.insert(e.name()).second) {
      throw InputError("duplicate entity '" + e.name() + "' in " + std::string(to_string(domain)) +
                       " domain");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::optional<RelationPhrase> make_phrase(std::string_view raw, std::string source,
                                          std::optional<double> weight_hint) {
  std::string text = normalize_phrase(raw);
  if (text.empty()) return std::nullopt;
  if (weight_hint && *weight_hint < 0.0) weight_hint = 0.0;
  return RelationPhrase{std::move(text), std::move(source), weight_hint};
}

RelationSet::RelationSet(Entity head, Entity tail, std::vector<RelationPhrase> relations)
    : head_(std::move(head)), tail_(std::move(tail)) {
  if (head_ == tail_) {
    throw InputError("relation set requires distinct entities, got '" + head_.name() + "' twice");
  }
  std::unordered_set<std::string> seen;
  for (auto& r : relations) {
    auto normalized = make_phrase(r.text, r.source, r.weight_hint);
    if (!normalized) continue;
    if (seen.insert(normalized->text).second) relations_.push_back(std::move(*normalized));
  }
  std::stable_sort(relations_.begin(), relations_.end(),
                   [](const RelationPhrase& a, const RelationPhrase& b) { return a.text < b.text; });
}

}  // namespace relmap
