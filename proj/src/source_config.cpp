#include "relmap/source_config.hpp"

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>

namespace relmap {

SourceList load_sources(const std::filesystem::path& path, const WarningSink& warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open source config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  const auto dir = path.parent_path();
  auto resolve = [&dir](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : dir / fp;
  };

  SourceList sources;
  std::set<std::string> ids;
  try {
    for (const auto& def : doc.at("sources")) {
      const auto id = def.at("id").get<std::string>();
      const auto kind = source_kind_from_string(def.at("kind").get<std::string>());
      std::map<std::string, std::string> config;
      if (def.contains("config")) {
        for (const auto& [k, v] : def["config"].items()) config[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
      if (!ids.insert(id).second) throw ConfigError("duplicate source id '" + id + "'");
      auto need = [&](const std::string& key) -> const std::string& {
        auto it = config.find(key);
        if (it == config.end()) throw ConfigError("source '" + id + "' needs config." + key);
        return it->second;
      };
      switch (kind) {
        case SourceKind::TripleLookup:
        case SourceKind::ConceptGraphApi:
        case SourceKind::LocalKb: {
          auto store = std::make_shared<const TripleStore>(resolve(need("path")));
          sources.push_back(std::make_shared<TripleLookupSource>(id, std::move(store), kind, config));
          break;
        }
        case SourceKind::Autocomplete: {
          auto client = std::make_shared<HttpSuggestionClient>(
              need("endpoint"), config.count("path") ? config["path"] : "/complete",
              config.count("param") ? config["param"] : "q");
          AutocompleteOptions options;
          options.warnings = warnings;
          sources.push_back(std::make_shared<AutocompleteSource>(id, std::move(client), options, true, config));
          break;
        }
        case SourceKind::GenerativeLm: {
          std::string api_key;
          if (config.count("api_key_env")) {
            if (const char* v = std::getenv(config["api_key_env"].c_str())) api_key = v;
          }
          auto client = std::make_shared<HttpCompletionClient>(
              need("endpoint"), config.count("model") ? config["model"] : "",
              config.count("path") ? config["path"] : "/v1/completions",
              config.count("max_tokens") ? std::stoi(config["max_tokens"]) : 96, api_key);
          auto prompt = config.count("prompt_template") ? load_prompt_template(resolve(config["prompt_template"]))
                                                        : default_relation_prompt();
          sources.push_back(std::make_shared<GenerativeSource>(id, std::move(client), std::move(prompt), true,
                                                               config, warnings));
          break;
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return sources;
}

void add_replay_sources(SourceList& sources, const Snapshot& snapshot) {
  std::set<std::string> present;
  for (const auto& s : sources) present.insert(s->id());
  for (const auto& id : snapshot.source_ids()) {
    if (!present.count(id)) sources.push_back(std::make_shared<ReplaySource>(id));
  }
}

SourceList without_sources(const SourceList& sources, const std::set<std::string>& disabled) {
  SourceList out;
  for (const auto& s : sources) {
    if (!disabled.count(s->id())) out.push_back(s);
  }
  return out;
}

}  // namespace relmap
