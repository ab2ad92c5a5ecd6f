#include "relmap/evaluation.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "relmap/detail/parallel.hpp"
#include "relmap/source_config.hpp"

namespace relmap {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

AnalogyProblem problem_from_json(const json& j, std::size_t position) {
  AnalogyProblem p;
  p.id = j.contains("id") ? j.at("id").get<std::string>() : "problem-" + std::to_string(position + 1);
  p.base = j.at("base").get<std::vector<std::string>>();
  p.target = j.at("target").get<std::vector<std::string>>();
  if (j.contains("gold")) p.gold = j.at("gold").get<std::map<std::string, std::string>>();
  if (j.contains("category")) p.category = problem_category_from_string(j.at("category").get<std::string>());
  return p;
}

AnalogyProblem problem_from_yaml(const YAML::Node& n, std::size_t position) {
  AnalogyProblem p;
  p.id = n["id"] ? n["id"].as<std::string>() : "problem-" + std::to_string(position + 1);
  if (!n["base"] || !n["target"]) throw ParseError("problem " + p.id + " lacks base or target");
  p.base = n["base"].as<std::vector<std::string>>();
  p.target = n["target"].as<std::vector<std::string>>();
  if (n["gold"]) p.gold = n["gold"].as<std::map<std::string, std::string>>();
  if (n["category"]) p.category = problem_category_from_string(n["category"].as<std::string>());
  return p;
}

std::vector<AnalogyProblem> load_quads(std::istream& in) {
  std::vector<AnalogyProblem> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = normalize_text(line);
    if (text.empty() || text.front() == '#') continue;
    const auto sep = text.find("::");
    if (sep == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected A:B::C:D");
    auto split = [&](const std::string& half) {
      const auto colon = half.find(':');
      if (colon == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected A:B::C:D");
      return std::pair{half.substr(0, colon), half.substr(colon + 1)};
    };
    const auto [a, b] = split(text.substr(0, sep));
    const auto [c, d] = split(text.substr(sep + 2));
    AnalogyProblem p;
    p.id = "quad-" + std::to_string(line_no);
    p.base = {a, b};
    p.target = {c, d};
    p.gold = {{a, c}, {b, d}};
    out.push_back(std::move(p));
  }
  return out;
}

double bijective_count(std::size_t n, std::size_t m) {
  const std::size_t hi = std::max(n, m), lo = std::min(n, m);
  double count = 1.0;
  for (std::size_t i = 0; i < lo; ++i) count *= static_cast<double>(hi - i);
  return count;
}

double relaxed_count(std::size_t n, std::size_t m) {
  try {
    return static_cast<double>(solution_space_size(n, m));
  } catch (const std::overflow_error&) {
    // Same sum in floating point for domains beyond 64-bit range.
    const std::size_t lo = std::min(n, m), hi = std::max(n, m);
    double total = 0.0, choose = 1.0, perm = 1.0;
    for (std::size_t i = 0; i <= lo; ++i) {
      if (i > 0) {
        choose = choose * static_cast<double>(lo - i + 1) / static_cast<double>(i);
        perm *= static_cast<double>(hi - i + 1);
      }
      total += choose * perm;
    }
    return total - static_cast<double>(n * m);
  }
}

ProblemResult run_problem(const AnalogyProblem& problem, const Engine& engine) {
  ProblemResult r;
  r.id = problem.id;
  r.category = problem.category;
  r.guess_bijective = guess_level(problem, GuessMode::Bijective);
  r.guess_relaxed = guess_level(problem, GuessMode::Relaxed);
  r.gold_pairs = problem.gold.size();

  auto result = engine.map(problem.base, problem.target);
  r.ranked = result.ranked;

  if (!engine.acquisition().live) {
    std::set<std::string> enabled;
    for (const auto& s : engine.sources()) enabled.insert(s->id());
    for (const auto* side : {&problem.base, &problem.target}) {
      for (const auto& name : *side) {
        if (!engine.snapshot().mentions(name, enabled)) {
          r.covered = false;
          warn(engine.acquisition().warnings,
               "problem '" + problem.id + "' is uncovered: no snapshot entry mentions '" + name + "'");
        }
      }
    }
    if (enabled.empty()) r.covered = false;
  }

  std::vector<Assignment> gold_pairs;
  for (const auto& [b, t] : problem.gold) gold_pairs.push_back({b, t});
  const Mapping gold(std::move(gold_pairs), problem.base, problem.target, 0.0);
  for (std::size_t k = 0; k < r.ranked.size(); ++k) {
    if (r.ranked[k].same_assignments(gold)) {
      r.gold_rank = k + 1;
      break;
    }
  }
  const auto& best = r.ranked.front();
  for (const auto& [b, t] : problem.gold) {
    const auto* image = best.image(b);
    if (image && *image == t) ++r.correct_pairs;
  }
  return r;
}

}  // namespace

std::string_view to_string(ProblemCategory c) {
  switch (c) {
    case ProblemCategory::Near: return "near";
    case ProblemCategory::Far: return "far";
    case ProblemCategory::Extended: return "extended";
    case ProblemCategory::Custom: return "custom";
  }
  return "custom";
}

ProblemCategory problem_category_from_string(std::string_view text) {
  const auto t = lower(text);
  if (t == "near") return ProblemCategory::Near;
  if (t == "far") return ProblemCategory::Far;
  if (t == "extended") return ProblemCategory::Extended;
  if (t == "custom") return ProblemCategory::Custom;
  throw ParseError("unknown problem category '" + std::string(text) + "'");
}

void validate_problem(AnalogyProblem& p) {
  auto norm_all = [](std::vector<std::string>& names, DomainTag tag) {
    for (auto& n : names) n = normalize_entity(n, tag).name();
  };
  try {
    norm_all(p.base, DomainTag::Base);
    norm_all(p.target, DomainTag::Target);
  } catch (const InvalidEntityError& e) {
    throw InputError("problem " + p.id + ": " + e.what());
  }
  const std::set<std::string> base(p.base.begin(), p.base.end()), target(p.target.begin(), p.target.end());
  if (base.size() < 2 || target.size() < 2) throw InputError("problem " + p.id + " needs two entities per side");
  if (base.size() != p.base.size() || target.size() != p.target.size()) {
    throw InputError("problem " + p.id + " repeats an entity");
  }
  std::map<std::string, std::string> gold;
  std::set<std::string> images;
  for (const auto& [b, t] : p.gold) {
    const auto nb = normalize_entity(b, DomainTag::Base).name();
    const auto nt = normalize_entity(t, DomainTag::Target).name();
    if (!base.count(nb)) throw InputError("problem " + p.id + ": gold key '" + nb + "' is not a base entity");
    if (!target.count(nt)) throw InputError("problem " + p.id + ": gold value '" + nt + "' is not a target entity");
    if (!images.insert(nt).second) throw InputError("problem " + p.id + ": gold is not injective");
    gold[nb] = nt;
  }
  if (gold.size() == 1) throw InputError("problem " + p.id + ": a single-pair gold mapping is not valid");
  p.gold = std::move(gold);
}

std::vector<AnalogyProblem> load_problems(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read problem file " + path.string());
  const auto ext = lower(path.extension().string());
  std::vector<AnalogyProblem> problems;
  try {
    if (ext == ".json") {
      const auto doc = json::parse(in);
      const auto& list = doc.is_object() ? doc.at("problems") : doc;
      for (std::size_t i = 0; i < list.size(); ++i) problems.push_back(problem_from_json(list.at(i), i));
    } else if (ext == ".yaml" || ext == ".yml") {
      const auto doc = YAML::Load(in);
      const auto list = doc.IsMap() ? doc["problems"] : doc;
      if (!list.IsSequence()) throw ParseError(path.string() + ": expected a list of problems");
      for (std::size_t i = 0; i < list.size(); ++i) problems.push_back(problem_from_yaml(list[i], i));
    } else {
      problems = load_quads(in);
    }
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const YAML::Exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  std::set<std::string> ids;
  for (auto& p : problems) {
    validate_problem(p);
    if (!ids.insert(p.id).second) throw ParseError(path.string() + ": duplicate problem id '" + p.id + "'");
  }
  return problems;
}

double guess_level(const AnalogyProblem& problem, GuessMode mode) {
  const auto n = problem.base.size(), m = problem.target.size();
  return 1.0 / (mode == GuessMode::Bijective ? bijective_count(n, m) : relaxed_count(n, m));
}

EvalReport evaluate(const std::vector<AnalogyProblem>& problems, const Engine& engine, const EvalOptions& options) {
  EvalReport report;
  report.problems.resize(problems.size());
  detail::parallel_for(problems.size(), options.threads,
                       [&](std::size_t k) { report.problems[k] = run_problem(problems[k], engine); });

  auto& a = report.aggregate;
  std::size_t gold_total = 0, gold_hit = 0, perfect = 0, top2 = 0, top3 = 0;
  for (const auto& r : report.problems) {
    if (!r.covered) {
      ++a.uncovered;
      continue;
    }
    ++a.evaluated;
    gold_total += r.gold_pairs;
    gold_hit += r.correct_pairs;
    perfect += r.perfect();
    top2 += r.within_top(2);
    top3 += r.within_top(3);
    a.mean_guess_bijective += r.guess_bijective;
    a.mean_guess_relaxed += r.guess_relaxed;
  }
  if (a.evaluated > 0) {
    const double n = static_cast<double>(a.evaluated);
    a.perfect = static_cast<double>(perfect) / n;
    a.top2 = static_cast<double>(top2) / n;
    a.top3 = static_cast<double>(top3) / n;
    a.mean_guess_bijective /= n;
    a.mean_guess_relaxed /= n;
  }
  if (gold_total > 0) a.per_entity = static_cast<double>(gold_hit) / static_cast<double>(gold_total);
  return report;
}

EvalReport evaluate_without(const std::vector<AnalogyProblem>& problems, const Engine& engine,
                            const std::string& source_id, const EvalOptions& options) {
  const bool known = std::any_of(engine.sources().begin(), engine.sources().end(),
                                 [&](const auto& s) { return s->id() == source_id; });
  if (!known) throw InputError("no source with id '" + source_id + "'");
  const Engine reduced = engine.with_sources(without_sources(engine.sources(), {source_id}));
  auto report = evaluate(problems, reduced, options);
  report.ablated_source = source_id;
  return report;
}

json report_to_json(const EvalReport& report) {
  json problems = json::array();
  for (const auto& r : report.problems) {
    json ranked = json::array();
    for (const auto& m : r.ranked) ranked.push_back(mapping_to_json(m));
    problems.push_back({{"id", r.id},
                        {"category", to_string(r.category)},
                        {"covered", r.covered},
                        {"gold_rank", r.gold_rank ? json(*r.gold_rank) : json(nullptr)},
                        {"perfect", r.perfect()},
                        {"correct_pairs", r.correct_pairs},
                        {"gold_pairs", r.gold_pairs},
                        {"guess_bijective", r.guess_bijective},
                        {"guess_relaxed", r.guess_relaxed},
                        {"ranked", ranked}});
  }
  const auto& a = report.aggregate;
  return {{"ablated_source", report.ablated_source.empty() ? json(nullptr) : json(report.ablated_source)},
          {"problems", problems},
          {"aggregate",
           {{"evaluated", a.evaluated},
            {"uncovered", a.uncovered},
            {"perfect", a.perfect},
            {"per_entity", a.per_entity},
            {"top2", a.top2},
            {"top3", a.top3},
            {"mean_guess_bijective", a.mean_guess_bijective},
            {"mean_guess_relaxed", a.mean_guess_relaxed}}}};
}

std::string report_to_text(const EvalReport& report) {
  std::ostringstream out;
  if (!report.ablated_source.empty()) out << "without source: " << report.ablated_source << '\n';
  out << "problem                 category  rank  correct  perfect\n";
  for (const auto& r : report.problems) {
    char line[160];
    std::snprintf(line, sizeof line, "%-23s %-9s %4s  %3zu/%-3zu  %s\n", r.id.c_str(),
                  std::string(to_string(r.category)).c_str(),
                  r.gold_rank ? std::to_string(*r.gold_rank).c_str() : "-", r.correct_pairs, r.gold_pairs,
                  !r.covered ? "uncovered" : r.perfect() ? "yes" : "no");
    out << line;
  }
  const auto& a = report.aggregate;
  out << "evaluated " << a.evaluated << ", uncovered " << a.uncovered << '\n'
      << "perfect " << fixed(a.perfect) << "  per-entity " << fixed(a.per_entity) << "  top-2 " << fixed(a.top2)
      << "  top-3 " << fixed(a.top3) << '\n'
      << "guess level: bijective " << fixed(a.mean_guess_bijective) << "  relaxed " << fixed(a.mean_guess_relaxed)
      << '\n';
  return out.str();
}

}  // namespace relmap
