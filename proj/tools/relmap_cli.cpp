// relmap: map entities between two domains from their relations.
//
//   relmap map --base "sun,earth,gravity" --target "nucleus,electrons,electric force" --snapshot s.jsonl
//   relmap suggest --base ... --target ... --entity newton --snapshot s.jsonl
//   relmap eval --problems problems.yaml --snapshot s.jsonl [--ablate openie]
//   relmap explain --base-pair earth,sun --target-pair electrons,nucleus --snapshot s.jsonl
//   relmap snapshot info --snapshot s.jsonl
//   relmap snapshot build --sources sources.json --problems p.yaml --snapshot out.jsonl --live
//
// Exit status: 0 ok, 1 no mapping found, 2 bad input or configuration, 3 a source failed.

#include <yaml-cpp/yaml.h>

#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>

#include "relmap/embedding.hpp"
#include "relmap/engine.hpp"
#include "relmap/evaluation.hpp"
#include "relmap/serialize.hpp"
#include "relmap/source_config.hpp"
#include "relmap/suggestion.hpp"

namespace fs = std::filesystem;
using namespace relmap;

namespace {

constexpr int kOk = 0;
constexpr int kNoMapping = 1;
constexpr int kBadInput = 2;
constexpr int kSourceFailure = 3;

struct Options {
  std::string snapshot;
  std::string sources;
  std::string record;
  std::string stoplist;
  std::string config;
  std::string format = "text";
  std::string embed_url;
  std::string embed_cache;
  std::vector<std::string> disable;
  bool live = false;
  bool quiet = false;
  double sim_threshold = 0.2;
  double cluster_threshold = 0.5;
  std::size_t top_k = 3;
  std::size_t beam = 20;
  std::size_t threads = 1;
  std::size_t show = 3;

  std::string base;
  std::string target;
  std::string entity;
  std::string problems;
  std::vector<std::string> ablate;
  std::string base_pair;
  std::string target_pair;
};

// Values from --config win over command-line flags.
void apply_config_file(Options& o) {
  if (o.config.empty()) return;
  if (!fs::exists(o.config)) throw ConfigError("config file not found: " + o.config);
  YAML::Node doc;
  try {
    doc = YAML::LoadFile(o.config);
  } catch (const YAML::Exception& e) {
    throw ConfigError(o.config + ": " + e.what());
  }
  if (!doc.IsMap()) throw ConfigError(o.config + ": expected a mapping of option names to values");
  try {
    for (const auto& kv : doc) {
      const auto key = kv.first.as<std::string>();
      const auto& v = kv.second;
      if (key == "snapshot") o.snapshot = v.as<std::string>();
      else if (key == "sources") o.sources = v.as<std::string>();
      else if (key == "record") o.record = v.as<std::string>();
      else if (key == "stoplist") o.stoplist = v.as<std::string>();
      else if (key == "format") o.format = v.as<std::string>();
      else if (key == "embed_url") o.embed_url = v.as<std::string>();
      else if (key == "embed_cache") o.embed_cache = v.as<std::string>();
      else if (key == "disable") o.disable = v.as<std::vector<std::string>>();
      else if (key == "live") o.live = v.as<bool>();
      else if (key == "sim_threshold") o.sim_threshold = v.as<double>();
      else if (key == "cluster_threshold") o.cluster_threshold = v.as<double>();
      else if (key == "top_k") o.top_k = v.as<std::size_t>();
      else if (key == "beam") o.beam = v.as<std::size_t>();
      else if (key == "threads") o.threads = v.as<std::size_t>();
      else throw ConfigError(o.config + ": unknown option '" + key + "'");
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(o.config + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = normalize_text(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Session {
  std::shared_ptr<Snapshot> snapshot;
  std::unique_ptr<Engine> engine;
  std::shared_ptr<std::atomic<int>> failures = std::make_shared<std::atomic<int>>(0);
};

std::shared_ptr<EmbeddingProvider> make_provider(const Options& o) {
  std::string url = o.embed_url;
  if (url.empty()) {
    if (const char* env = std::getenv("RELMAP_EMBED_URL"); env && *env) url = env;
  }
  std::shared_ptr<EmbeddingProvider> provider;
  if (!url.empty()) {
    auto remote = std::make_shared<RemoteEmbedder>(url, "", 0);
    const auto [model, dim] = remote->health();
    provider = std::make_shared<RemoteEmbedder>(url, model, dim);
  } else if (o.embed_cache.empty()) {
    provider = std::make_shared<HashedNgramEmbedder>();
  }
  if (!o.embed_cache.empty()) provider = std::make_shared<FileCacheEmbedder>(o.embed_cache, provider);
  return std::make_shared<MemoEmbedder>(std::move(provider));
}

// `allow_new_snapshot`: a missing snapshot file starts an empty one instead of failing.
Session open_session(const Options& o, bool allow_new_snapshot = false) {
  Session s;
  if (o.snapshot.empty()) {
    s.snapshot = std::make_shared<Snapshot>();
  } else if (!fs::exists(o.snapshot)) {
    if (!allow_new_snapshot) throw ConfigError("snapshot file not found: " + o.snapshot);
    s.snapshot = std::make_shared<Snapshot>();
  } else {
    s.snapshot = std::make_shared<Snapshot>(Snapshot::load(o.snapshot));
  }

  WarningSink warnings;
  if (!o.quiet) warnings = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };

  SourceList sources;
  if (!o.sources.empty()) sources = load_sources(o.sources, warnings);
  add_replay_sources(sources, *s.snapshot);
  if (!o.disable.empty()) {
    sources = without_sources(sources, std::set<std::string>(o.disable.begin(), o.disable.end()));
  }

  auto stoplist = std::make_shared<const Stoplist>(o.stoplist.empty() ? Stoplist::load_default()
                                                                        : Stoplist::load(o.stoplist));
  SearchConfig config;
  config.beam_width = o.beam;
  config.threads = std::max<std::size_t>(1, o.threads);
  config.scoring = ScoringParams{o.sim_threshold, o.cluster_threshold, o.top_k};
  AcquisitionOptions acquisition;
  acquisition.live = o.live;
  acquisition.warnings = warnings;
  acquisition.on_source_failure = [failures = s.failures](const std::string&) { ++*failures; };
  s.engine = std::make_unique<Engine>(std::move(sources), s.snapshot, make_provider(o), std::move(stoplist), config,
                                      std::move(acquisition));
  return s;
}

void finish_session(const Options& o, const Session& s) {
  if (!o.record.empty()) s.snapshot->save(o.record);
}

int status_after(const Options& o, const Session& s, int status) {
  finish_session(o, s);
  if (o.live && *s.failures > 0) return kSourceFailure;
  return status;
}

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  throw InputError("unsupported --format '" + format + "' for this command");
}

int cmd_map(const Options& o) {
  check_format(o.format, {"text", "json", "dot"});
  auto s = open_session(o);
  const auto result = s.engine->map(split_list(o.base), split_list(o.target));
  if (o.format == "json") {
    std::cout << map_result_to_json(result).dump(2) << '\n';
  } else if (o.format == "dot") {
    std::cout << mapping_to_dot(result.best(), result.table);
  } else {
    std::cout << map_result_to_text(result, o.show);
  }
  return status_after(o, s, result.best().empty() ? kNoMapping : kOk);
}

int cmd_suggest(const Options& o) {
  check_format(o.format, {"text", "json"});
  auto s = open_session(o);
  const auto result = s.engine->map(split_list(o.base), split_list(o.target));
  if (result.best().empty()) {
    std::cerr << "no mapping found; nothing to extend\n";
    return status_after(o, s, kNoMapping);
  }
  const auto entity = normalize_entity(o.entity).name();
  const auto suggestions = suggest(*s.engine, result, result.best(), entity);
  if (o.format == "json") {
    json out = json::array();
    for (const auto& c : suggestions.candidates) {
      out.push_back({{"entity", c.entity},
                     {"representative", c.representative},
                     {"members", c.cluster_members},
                     {"score", c.score},
                     {"mapping", mapping_to_json(c.best_mapping)}});
    }
    std::cout << out.dump(2) << '\n';
  } else if (suggestions.status == SuggestionStatus::NoSuggestions) {
    std::cout << "no suggestions for " << entity << " (" << suggestions.harvested.size() << " names harvested)\n";
  } else {
    for (std::size_t i = 0; i < suggestions.candidates.size(); ++i) {
      const auto& c = suggestions.candidates[i];
      std::cout << '#' << (i + 1) << "  " << entity << " -> " << c.entity << "  score " << c.best_mapping.total_score()
                << "  cluster {";
      for (std::size_t k = 0; k < c.cluster_members.size(); ++k) std::cout << (k ? ", " : "") << c.cluster_members[k];
      std::cout << "}\n";
    }
  }
  return status_after(o, s, kOk);
}

int cmd_eval(const Options& o) {
  check_format(o.format, {"text", "json"});
  auto s = open_session(o);
  const auto problems = load_problems(o.problems);
  EvalOptions eo;
  eo.threads = std::max<std::size_t>(1, o.threads);
  std::vector<EvalReport> reports{evaluate(problems, *s.engine, eo)};
  for (const auto& id : o.ablate) reports.push_back(evaluate_without(problems, *s.engine, id, eo));
  if (o.format == "json") {
    json out = json::array();
    for (const auto& r : reports) out.push_back(report_to_json(r));
    std::cout << (out.size() == 1 ? out[0] : out).dump(2) << '\n';
  } else {
    for (std::size_t i = 0; i < reports.size(); ++i) std::cout << (i ? "\n" : "") << report_to_text(reports[i]);
  }
  return status_after(o, s, kOk);
}

int cmd_explain(const Options& o) {
  check_format(o.format, {"text", "json"});
  const auto bp = split_list(o.base_pair), tp = split_list(o.target_pair);
  if (bp.size() != 2 || tp.size() != 2) throw InputError("--base-pair and --target-pair take two names each");
  auto s = open_session(o);
  if (!o.live) {
    std::set<std::string> ids;
    for (const auto& src : s.engine->sources()) {
      if (src->requires_network()) ids.insert(src->id());
    }
    const bool all_network = ids.size() == s.engine->sources().size();
    for (const auto& name : {bp[0], bp[1], tp[0], tp[1]}) {
      if (all_network && !s.snapshot->mentions(normalize_entity(name).name(), ids)) {
        throw InputError("unknown entity '" + name + "': not in the snapshot");
      }
    }
  }
  const auto x = s.engine->explain(bp[0], bp[1], tp[0], tp[1]);
  if (o.format == "json") {
    std::cout << explanation_to_json(x).dump(2) << '\n';
  } else {
    std::cout << explanation_to_text(x);
  }
  return status_after(o, s, kOk);
}

int cmd_snapshot_info(const Options& o) {
  if (o.snapshot.empty()) throw InputError("--snapshot is required");
  if (!fs::exists(o.snapshot)) throw ConfigError("snapshot file not found: " + o.snapshot);
  const auto snap = Snapshot::load(o.snapshot);
  std::cout << "created   " << snap.created_at() << '\n'
            << "relations " << snap.relation_entry_count() << '\n'
            << "entities  " << snap.entity_entry_count() << '\n'
            << "sources  ";
  for (const auto& id : snap.source_ids()) std::cout << ' ' << id;
  std::cout << '\n';
  return kOk;
}

// Queries every pair of the given domains (or problems) and writes the snapshot.
int cmd_snapshot_build(Options o) {
  if (o.snapshot.empty() && o.record.empty()) throw InputError("--snapshot or --record is required");
  if (o.snapshot.empty()) o.snapshot = o.record;
  if (o.record.empty()) o.record = o.snapshot;
  auto s = open_session(o, true);
  std::vector<std::vector<std::string>> domains;
  if (!o.problems.empty()) {
    for (const auto& p : load_problems(o.problems)) {
      domains.push_back(p.base);
      domains.push_back(p.target);
    }
  }
  if (!o.base.empty()) domains.push_back(split_list(o.base));
  if (!o.target.empty()) domains.push_back(split_list(o.target));
  if (domains.empty()) throw InputError("give --problems or --base/--target");
  for (const auto& d : domains) s.engine->relations(make_domain(d, DomainTag::Base));
  const int status = status_after(o, s, kOk);
  std::cerr << "wrote " << o.record << " (" << s.snapshot->relation_entry_count() << " relation entries)\n";
  return status;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--snapshot", o.snapshot, "Snapshot file (JSON lines)");
  cmd->add_option("--sources", o.sources, "Source definition file (JSON)");
  cmd->add_option("--disable", o.disable, "Source ids to leave out");
  cmd->add_flag("--live", o.live, "Query network sources on snapshot misses");
  cmd->add_option("--record", o.record, "Write the (possibly extended) snapshot here");
  cmd->add_option("--format", o.format, "text, json or dot")->capture_default_str();
  cmd->add_option("--sim-threshold", o.sim_threshold, "Phrase similarity threshold")->capture_default_str();
  cmd->add_option("--cluster-threshold", o.cluster_threshold, "Clustering distance threshold")->capture_default_str();
  cmd->add_option("--top-k", o.top_k, "Matched cluster edges kept per direction")->capture_default_str();
  cmd->add_option("--beam", o.beam, "Beam width")->capture_default_str();
  cmd->add_option("--stoplist", o.stoplist, "Stoplist file (default: shipped 500 n-grams)");
  cmd->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  cmd->add_option("--embed-url", o.embed_url, "Embedding service URL (or RELMAP_EMBED_URL)");
  cmd->add_option("--embed-cache", o.embed_cache, "Embedding cache file (JSON lines)");
  cmd->add_option("--config", o.config, "YAML/JSON file whose values override flags");
  cmd->add_flag("-q,--quiet", o.quiet, "Suppress warnings");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relational analogy mapping"};
  app.require_subcommand(1);
  Options o;

  auto* map = app.add_subcommand("map", "Find the best mapping from base to target entities");
  add_common(map, o);
  map->add_option("--base", o.base, "Comma-separated base entities")->required();
  map->add_option("--target", o.target, "Comma-separated target entities")->required();
  map->add_option("--show", o.show, "Ranked mappings to print (text)")->capture_default_str();

  auto* sug = app.add_subcommand("suggest", "Suggest a target entity for an unmapped base entity");
  add_common(sug, o);
  sug->add_option("--base", o.base, "Comma-separated base entities")->required();
  sug->add_option("--target", o.target, "Comma-separated target entities")->required();
  sug->add_option("--entity", o.entity, "Unmapped base entity")->required();

  auto* ev = app.add_subcommand("eval", "Evaluate on a problem file");
  add_common(ev, o);
  ev->add_option("--problems", o.problems, "Problem file (.json, .yaml, or A:B::C:D lines)")->required();
  ev->add_option("--ablate", o.ablate, "Also evaluate with this source left out (repeatable)");

  auto* ex = app.add_subcommand("explain", "Show how one pair correspondence is scored");
  add_common(ex, o);
  ex->add_option("--base-pair", o.base_pair, "b1,b2")->required();
  ex->add_option("--target-pair", o.target_pair, "t1,t2")->required();

  auto* snap = app.add_subcommand("snapshot", "Inspect or build snapshots");
  snap->require_subcommand(1);
  auto* info = snap->add_subcommand("info", "Summarize a snapshot");
  info->add_option("--snapshot", o.snapshot, "Snapshot file")->required();
  auto* build = snap->add_subcommand("build", "Query sources and write a snapshot");
  add_common(build, o);
  build->add_option("--problems", o.problems, "Problem file whose domains to cover");
  build->add_option("--base", o.base, "Comma-separated entities");
  build->add_option("--target", o.target, "Comma-separated entities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    apply_config_file(o);
    if (*map) return cmd_map(o);
    if (*sug) return cmd_suggest(o);
    if (*ev) return cmd_eval(o);
    if (*ex) return cmd_explain(o);
    if (*info) return cmd_snapshot_info(o);
    if (*build) return cmd_snapshot_build(o);
  } catch (const InvalidEntityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const SourceUnavailableError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSourceFailure;
  } catch (const EmbeddingUnavailableError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSourceFailure;
  }
  return kBadInput;
}
