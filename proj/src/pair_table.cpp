#include "relmap/pair_table.hpp"

#include <algorithm>

#include "relmap/detail/parallel.hpp"

namespace relmap {
namespace {

void check_names(std::vector<std::string>& names, const char* side) {
  std::sort(names.begin(), names.end());
  if (names.size() < 2) throw InputError(std::string("need at least two ") + side + " entities");
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw InputError(std::string("duplicate ") + side + " entity");
  }
}

}  // namespace

PairTable::PairTable(std::vector<std::string> base, std::vector<std::string> target)
    : base_(std::move(base)), target_(std::move(target)) {
  check_names(base_, "base");
  check_names(target_, "target");
  const std::size_t n = base_.size(), m = target_.size();
  entries_.resize(n * (n - 1) / 2 * m * m);
  scores_.assign(entries_.size(), 0.0);
}

PairTable PairTable::from_function(
    std::vector<std::string> base, std::vector<std::string> target,
    const std::function<double(std::size_t, std::size_t, std::size_t, std::size_t)>& score) {
  PairTable t(std::move(base), std::move(target));
  for (std::size_t i = 0; i < t.base_.size(); ++i) {
    for (std::size_t j = i + 1; j < t.base_.size(); ++j) {
      for (std::size_t k = 0; k < t.target_.size(); ++k) {
        for (std::size_t p = 0; p < t.target_.size(); ++p) {
          if (k == p) continue;
          PairSimilarity s;
          s.base_pair = {t.base_[i], t.base_[j]};
          s.target_pair = {t.target_[k], t.target_[p]};
          s.score = score(i, j, k, p);
          if (!(s.score >= 0.0)) throw InputError("pair scores must be nonnegative");
          t.set(i, j, k, p, std::move(s));
        }
      }
    }
  }
  return t;
}

std::size_t PairTable::base_index(const std::string& name) const {
  auto it = std::lower_bound(base_.begin(), base_.end(), name);
  if (it == base_.end() || *it != name) throw InputError("unknown base entity '" + name + "'");
  return static_cast<std::size_t>(it - base_.begin());
}

std::size_t PairTable::target_index(const std::string& name) const {
  auto it = std::lower_bound(target_.begin(), target_.end(), name);
  if (it == target_.end() || *it != name) throw InputError("unknown target entity '" + name + "'");
  return static_cast<std::size_t>(it - target_.begin());
}

std::size_t PairTable::entry_count() const noexcept {
  const std::size_t n = base_.size(), m = target_.size();
  return n * (n - 1) / 2 * m * (m - 1);
}

std::size_t PairTable::slot(std::size_t i, std::size_t j, std::size_t k, std::size_t p) const {
  const std::size_t n = base_.size(), m = target_.size();
  if (!(i < j && j < n && k < m && p < m && k != p)) throw std::out_of_range("pair table index out of range");
  // Row-major index of (i, j) within the strict upper triangle.
  const std::size_t pair = i * (2 * n - i - 1) / 2 + (j - i - 1);
  return (pair * m + k) * m + p;
}

void PairTable::set(std::size_t i, std::size_t j, std::size_t k, std::size_t p, PairSimilarity value) {
  const auto s = slot(i, j, k, p);
  scores_[s] = value.score;
  entries_[s] = std::move(value);
}

const PairSimilarity& PairTable::entry(std::size_t i, std::size_t j, std::size_t k, std::size_t p) const {
  return entries_[slot(i, j, k, p)];
}

double PairTable::score(std::size_t i, std::size_t j, std::size_t k, std::size_t p) const {
  return i < j ? scores_[slot(i, j, k, p)] : scores_[slot(j, i, p, k)];
}

bool PairTable::all_zero() const {
  return std::all_of(scores_.begin(), scores_.end(), [](double s) { return s == 0.0; });
}

PairTable score_all_pairs(const std::vector<Entity>& base, const std::vector<Entity>& target,
                          const RelationIndex& index, const PairScorer& scorer, std::size_t threads) {
  std::vector<std::string> base_names, target_names;
  for (const auto& e : base) base_names.push_back(e.name());
  for (const auto& e : target) target_names.push_back(e.name());
  PairTable table(base_names, target_names);

  auto sorted_entities = [](std::vector<Entity> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto bs = sorted_entities(base);
  const auto ts = sorted_entities(target);

  struct Job {
    std::size_t i, j, k, p;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    for (std::size_t j = i + 1; j < bs.size(); ++j) {
      for (std::size_t k = 0; k < ts.size(); ++k) {
        for (std::size_t p = 0; p < ts.size(); ++p) {
          if (k != p) jobs.push_back({i, j, k, p});
        }
      }
    }
  }

  // Distinct slots: concurrent writes never touch the same element.
  detail::parallel_for(jobs.size(), threads, [&](std::size_t n) {
    const auto& job = jobs[n];
    table.set(job.i, job.j, job.k, job.p, scorer.sim_star(bs[job.i], bs[job.j], ts[job.k], ts[job.p], index));
  });
  return table;
}

}  // namespace relmap
