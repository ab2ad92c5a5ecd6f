#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relmap/engine.hpp"
#include "relmap/serialize.hpp"

namespace relmap {

enum class ProblemCategory { Near, Far, Extended, Custom };

std::string_view to_string(ProblemCategory c);
ProblemCategory problem_category_from_string(std::string_view text);

struct AnalogyProblem {
  std::string id;
  std::vector<std::string> base;
  std::vector<std::string> target;
  /// Base name -> target name; base entities absent here are expected unmapped.
  std::map<std::string, std::string> gold;
  ProblemCategory category = ProblemCategory::Custom;
};

/// Normalizes names in place and checks the problem: two or more entities per side,
/// gold injective with keys in base and values in target, gold size != 1.
/// Throws InputError.
void validate_problem(AnalogyProblem& problem);

/// Loads problems from .json, .yaml/.yml (a list, or an object with "problems"), or a
/// text file of "A:B::C:D" lines (A -> C, B -> D). Every problem is validated.
/// Throws ConfigError when the file cannot be read and ParseError on bad content.
std::vector<AnalogyProblem> load_problems(const std::filesystem::path& path);

enum class GuessMode { Bijective, Relaxed };

/// Chance that a uniformly drawn mapping equals gold. Bijective: 1 / P(max(n,m), min(n,m))
/// (1/n! when n = m). Relaxed: 1 / solution_space_size(n, m).
double guess_level(const AnalogyProblem& problem, GuessMode mode);

struct ProblemResult {
  std::string id;
  ProblemCategory category = ProblemCategory::Custom;
  /// False when some entity has no snapshot entry from the enabled sources (offline runs).
  bool covered = true;
  std::vector<Mapping> ranked;
  /// 1-based position of gold among the ranked mappings.
  std::optional<std::size_t> gold_rank;
  std::size_t correct_pairs = 0;
  std::size_t gold_pairs = 0;
  double guess_bijective = 0.0;
  double guess_relaxed = 0.0;

  bool perfect() const { return gold_rank == 1u; }
  bool within_top(std::size_t k) const { return gold_rank && *gold_rank <= k; }
};

struct EvalAggregates {
  std::size_t evaluated = 0;
  std::size_t uncovered = 0;
  double perfect = 0.0;
  /// Gold pairs reproduced over all gold pairs (micro average).
  double per_entity = 0.0;
  double top2 = 0.0;
  double top3 = 0.0;
  double mean_guess_bijective = 0.0;
  double mean_guess_relaxed = 0.0;
};

struct EvalReport {
  std::vector<ProblemResult> problems;
  EvalAggregates aggregate;
  /// Source left out for this run, empty for the full configuration.
  std::string ablated_source;
};

struct EvalOptions {
  std::size_t threads = 1;
};

/// Runs every problem through `engine` and aggregates over covered problems.
EvalReport evaluate(const std::vector<AnalogyProblem>& problems, const Engine& engine, const EvalOptions& options = {});

/// evaluate with one source removed from the engine.
EvalReport evaluate_without(const std::vector<AnalogyProblem>& problems, const Engine& engine,
                            const std::string& source_id, const EvalOptions& options = {});

json report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

}  // namespace relmap
