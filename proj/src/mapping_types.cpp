#include <algorithm>
#include <set>

#include "relmap/errors.hpp"
#include "relmap/mapping_types.hpp"

namespace relmap {

Mapping::Mapping(std::vector<Assignment> pairs, const std::vector<std::string>& base_names,
                 const std::vector<std::string>& target_names, double total_score)
    : pairs_(std::move(pairs)), total_score_(total_score) {
  if (pairs_.size() == 1) throw InputError("mappings of size 1 are not allowed");
  if (total_score_ < 0.0) throw InputError("mapping score must be nonnegative");

  const std::set<std::string> base_set(base_names.begin(), base_names.end());
  const std::set<std::string> target_set(target_names.begin(), target_names.end());
  std::set<std::string> used_base;
  std::set<std::string> used_target;
  for (const auto& a : pairs_) {
    if (!base_set.count(a.base)) throw InputError("'" + a.base + "' is not a base entity");
    if (!target_set.count(a.target)) throw InputError("'" + a.target + "' is not a target entity");
    if (!used_base.insert(a.base).second) {
      throw InputError("base entity '" + a.base + "' is mapped twice");
    }
    if (!used_target.insert(a.target).second) {
      throw InputError("target entity '" + a.target + "' is the image of two base entities");
    }
  }
  std::sort(pairs_.begin(), pairs_.end());
  for (const auto& b : base_set) {
    if (!used_base.count(b)) unmapped_base_.push_back(b);
  }
  for (const auto& t : target_set) {
    if (!used_target.count(t)) unmapped_target_.push_back(t);
  }
}

const std::string* Mapping::image(const std::string& base) const {
  for (const auto& a : pairs_) {
    if (a.base == base) return &a.target;
  }
  return nullptr;
}

bool Mapping::same_assignments(const Mapping& other) const {
  return pairs_ == other.pairs_ && unmapped_base_ == other.unmapped_base_ &&
         unmapped_target_ == other.unmapped_target_;
}

}  // namespace relmap
