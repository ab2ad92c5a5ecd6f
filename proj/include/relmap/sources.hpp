#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relmap/entity.hpp"
#include "relmap/errors.hpp"
#include "relmap/snapshot.hpp"
#include "relmap/triple_store.hpp"

namespace relmap {

enum class SourceKind { LocalKb, TripleLookup, ConceptGraphApi, Autocomplete, GenerativeLm };

std::string_view to_string(SourceKind kind);
/// Accepts the upper-case spellings used in source config files ("TRIPLE_LOOKUP", ...).
SourceKind source_kind_from_string(std::string_view text);

/// Answer for one directed query. Sources that learn about the opposite direction
/// as a side effect (the generative source parses both orders) fill `reverse`.
struct SourceAnswer {
  std::vector<std::string> forward;
  std::optional<std::vector<std::string>> reverse;
};

class RelationSource {
 public:
  RelationSource(std::string id, SourceKind kind, std::map<std::string, std::string> config = {})
      : id_(std::move(id)), kind_(kind), config_(std::move(config)) {}
  virtual ~RelationSource() = default;

  const std::string& id() const noexcept { return id_; }
  SourceKind kind() const noexcept { return kind_; }
  const std::map<std::string, std::string>& config() const noexcept { return config_; }

  /// Network-backed sources are consulted on a snapshot miss only in live mode.
  virtual bool requires_network() const { return false; }

  /// Throws SourceUnavailableError when the source cannot answer right now.
  virtual SourceAnswer query(const Entity& head, const Entity& tail) = 0;

  virtual bool supports_entity_harvest() const { return false; }
  /// Entities e such that (known, relation, e) or (e, relation, known) holds.
  virtual std::vector<std::string> harvest_entities(const Entity& known, const std::string& relation,
                                                    HarvestDirection direction);

 private:
  std::string id_;
  SourceKind kind_;
  std::map<std::string, std::string> config_;
};

// ---------------------------------------------------------------------------
// Clients for remote endpoints
// ---------------------------------------------------------------------------

/// Query auto-completion endpoint: ranked completion strings for a prefix.
class SuggestionClient {
 public:
  virtual ~SuggestionClient() = default;
  /// May throw ThrottledError or SourceUnavailableError.
  virtual std::vector<std::string> complete(const std::string& query) = 0;
};

/// Text-completion language model endpoint.
class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

/// Canned answers, keyed by exact query/prompt. Unknown keys yield no completions.
class FixtureSuggestionClient : public SuggestionClient {
 public:
  explicit FixtureSuggestionClient(std::map<std::string, std::vector<std::string>> answers)
      : answers_(std::move(answers)) {}
  std::vector<std::string> complete(const std::string& query) override;
  const std::vector<std::string>& queries_seen() const noexcept { return seen_; }

 private:
  std::map<std::string, std::vector<std::string>> answers_;
  std::vector<std::string> seen_;
};

class FixtureCompletionClient : public CompletionClient {
 public:
  using Responder = std::function<std::string(const std::string& prompt)>;
  explicit FixtureCompletionClient(Responder responder) : responder_(std::move(responder)) {}
  std::string complete(const std::string& prompt) override { return responder_(prompt); }

 private:
  Responder responder_;
};

/// GET <base_url><path>?<param>=<query>; the body must be a JSON array of strings.
class HttpSuggestionClient : public SuggestionClient {
 public:
  HttpSuggestionClient(std::string base_url, std::string path = "/complete",
                       std::string param = "q");
  std::vector<std::string> complete(const std::string& query) override;

 private:
  std::string base_url_;
  std::string path_;
  std::string param_;
};

/// POST <base_url><path> with {"model","prompt","max_tokens","temperature":0};
/// reads choices[0].text. An API key, when set, is sent as a bearer token.
class HttpCompletionClient : public CompletionClient {
 public:
  HttpCompletionClient(std::string base_url, std::string model, std::string path = "/v1/completions",
                       int max_tokens = 96, std::string api_key = {});
  std::string complete(const std::string& prompt) override;

 private:
  std::string base_url_;
  std::string model_;
  std::string path_;
  int max_tokens_;
  std::string api_key_;
};

// ---------------------------------------------------------------------------
// Extraction primitives
// ---------------------------------------------------------------------------

/// Predicates of triples whose subject is a surface form of `head` and whose object
/// is a surface form of `tail`. Order follows the store; duplicates removed.
std::vector<RelationPhrase> triple_lookup(const Entity& head, const Entity& tail,
                                          const TripleStore& store, const std::string& source_id = "triples");

struct AutocompleteOptions {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{200};
  /// Injected so tests do not sleep.
  std::function<void(std::chrono::milliseconds)> sleep;
  WarningSink warnings;
};

/// Question words combined with optional articles to form completion queries.
const std::vector<std::string>& autocomplete_questions();
const std::vector<std::string>& autocomplete_prefixes();

/// Extracts the text between head and tail in completions of
/// "<question> [<prefix>] <head>" queries.
std::vector<RelationPhrase> autocomplete_harvest(const Entity& head, const Entity& tail,
                                                 SuggestionClient& client,
                                                 const AutocompleteOptions& options = {},
                                                 const std::string& source_id = "autocomplete");

/// Applies the completion pattern to one completion string; returns the captured
/// relation text when `completion` reads "<query> <middle> <tail-form>".
std::optional<std::string> match_completion(const std::string& query, const std::string& completion,
                                            const Entity& tail);

struct DirectedPhrases {
  std::vector<RelationPhrase> forward;   // head -> tail
  std::vector<RelationPhrase> backward;  // tail -> head
};

/// The default few-shot relation prompt with {head}/{tail} slots.
const std::string& default_relation_prompt();
std::string load_prompt_template(const std::filesystem::path& path);
std::string render_prompt(const std::string& prompt_template, const Entity& head, const Entity& tail);

/// Parses "A:" lines of a completion. A sentence "<x> <text> <y>" where x and y are
/// surface forms of the two entities (leading articles ignored) yields <text> in the
/// direction x -> y. Everything else is discarded.
DirectedPhrases parse_generative_answer(const std::string& completion, const Entity& head,
                                        const Entity& tail, const std::string& source_id = "generative",
                                        const WarningSink& warnings = {});

DirectedPhrases generative_relations(const Entity& head, const Entity& tail, CompletionClient& lm,
                                     const std::string& prompt_template,
                                     const std::string& source_id = "generative",
                                     const WarningSink& warnings = {});

// ---------------------------------------------------------------------------
// Sources
// ---------------------------------------------------------------------------

/// Triple-file backed source. Also stands in for concept-graph APIs fed from an
/// edge dump (kind CONCEPT_GRAPH_API) and local knowledge bases (LOCAL_KB).
class TripleLookupSource : public RelationSource {
 public:
  TripleLookupSource(std::string id, std::shared_ptr<const TripleStore> store,
                     SourceKind kind = SourceKind::TripleLookup,
                     std::map<std::string, std::string> config = {});
  SourceAnswer query(const Entity& head, const Entity& tail) override;
  bool supports_entity_harvest() const override { return true; }
  std::vector<std::string> harvest_entities(const Entity& known, const std::string& relation,
                                            HarvestDirection direction) override;

 private:
  std::shared_ptr<const TripleStore> store_;
};

class AutocompleteSource : public RelationSource {
 public:
  AutocompleteSource(std::string id, std::shared_ptr<SuggestionClient> client,
                     AutocompleteOptions options = {}, bool networked = true,
                     std::map<std::string, std::string> config = {});
  bool requires_network() const override { return networked_; }
  SourceAnswer query(const Entity& head, const Entity& tail) override;
  bool supports_entity_harvest() const override { return true; }
  std::vector<std::string> harvest_entities(const Entity& known, const std::string& relation,
                                            HarvestDirection direction) override;

 private:
  std::vector<std::string> complete_with_backoff(const std::string& query);

  std::shared_ptr<SuggestionClient> client_;
  AutocompleteOptions options_;
  bool networked_;
};

class GenerativeSource : public RelationSource {
 public:
  GenerativeSource(std::string id, std::shared_ptr<CompletionClient> lm, std::string prompt_template,
                   bool networked = true, std::map<std::string, std::string> config = {},
                   WarningSink warnings = {});
  bool requires_network() const override { return networked_; }
  SourceAnswer query(const Entity& head, const Entity& tail) override;

 private:
  std::shared_ptr<CompletionClient> lm_;
  std::string prompt_template_;
  bool networked_;
  WarningSink warnings_;
};

/// A source that exists only through its snapshot entries; any live query fails.
class ReplaySource : public RelationSource {
 public:
  explicit ReplaySource(std::string id, SourceKind kind = SourceKind::LocalKb)
      : RelationSource(std::move(id), kind) {}
  bool requires_network() const override { return true; }
  SourceAnswer query(const Entity& head, const Entity& tail) override;
  std::vector<std::string> harvest_entities(const Entity& known, const std::string& relation,
                                            HarvestDirection direction) override;
  bool supports_entity_harvest() const override { return true; }
};

}  // namespace relmap
