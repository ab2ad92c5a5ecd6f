#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relmap {

enum class DomainTag { Base, Target };

std::string_view to_string(DomainTag tag);

/// Lowercases ASCII, trims, and collapses internal whitespace runs to one space.
std::string normalize_text(std::string_view raw);

/// normalize_text plus stripping of punctuation at both edges.
std::string normalize_phrase(std::string_view raw);

/// A named participant of one domain. Identity is the normalized name.
class Entity {
 public:
  const std::string& name() const noexcept { return name_; }
  /// Query variants: the normalized name first, then naive singular/plural forms.
  const std::vector<std::string>& surface_forms() const noexcept { return surface_forms_; }
  DomainTag domain() const noexcept { return domain_; }

  friend bool operator==(const Entity& a, const Entity& b) noexcept { return a.name_ == b.name_; }
  friend std::strong_ordering operator<=>(const Entity& a, const Entity& b) noexcept {
    return a.name_ <=> b.name_;
  }

 private:
  friend Entity normalize_entity(std::string_view raw, DomainTag domain);
  Entity(std::string name, std::vector<std::string> forms, DomainTag domain)
      : name_(std::move(name)), surface_forms_(std::move(forms)), domain_(domain) {}

  std::string name_;
  std::vector<std::string> surface_forms_;
  DomainTag domain_;
};

/// Throws InvalidEntityError on empty or whitespace-only input.
Entity normalize_entity(std::string_view raw, DomainTag domain = DomainTag::Base);

/// Normalizes a list of raw names into one domain. Duplicate names are an InputError.
std::vector<Entity> make_domain(const std::vector<std::string>& raw_names, DomainTag domain);

struct RelationPhrase {
  std::string text;
  std::string source;
  std::optional<double> weight_hint;

  friend bool operator==(const RelationPhrase&, const RelationPhrase&) = default;
};

/// Builds a phrase with normalized text; nullopt when nothing is left after normalization.
std::optional<RelationPhrase> make_phrase(std::string_view raw, std::string source,
                                          std::optional<double> weight_hint = std::nullopt);

/// Relations holding for the ordered pair (head, tail). Phrases are unique by text and kept
/// sorted by text so the set has one canonical form regardless of how it was assembled.
class RelationSet {
 public:
  RelationSet(Entity head, Entity tail, std::vector<RelationPhrase> relations = {});

  const Entity& head() const noexcept { return head_; }
  const Entity& tail() const noexcept { return tail_; }
  const std::vector<RelationPhrase>& relations() const noexcept { return relations_; }
  bool empty() const noexcept { return relations_.empty(); }
  std::size_t size() const noexcept { return relations_.size(); }

  friend bool operator==(const RelationSet&, const RelationSet&) = default;

 private:
  Entity head_;
  Entity tail_;
  std::vector<RelationPhrase> relations_;
};

}  // namespace relmap
