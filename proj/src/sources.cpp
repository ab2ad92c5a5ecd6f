#include "relmap/sources.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

namespace relmap {

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::LocalKb: return "LOCAL_KB";
    case SourceKind::TripleLookup: return "TRIPLE_LOOKUP";
    case SourceKind::ConceptGraphApi: return "CONCEPT_GRAPH_API";
    case SourceKind::Autocomplete: return "AUTOCOMPLETE";
    case SourceKind::GenerativeLm: return "GENERATIVE_LM";
  }
  return "UNKNOWN";
}

SourceKind source_kind_from_string(std::string_view text) {
  static const std::map<std::string, SourceKind, std::less<>> kinds{
      {"LOCAL_KB", SourceKind::LocalKb},
      {"TRIPLE_LOOKUP", SourceKind::TripleLookup},
      {"CONCEPT_GRAPH_API", SourceKind::ConceptGraphApi},
      {"AUTOCOMPLETE", SourceKind::Autocomplete},
      {"GENERATIVE_LM", SourceKind::GenerativeLm},
  };
  auto it = kinds.find(text);
  if (it == kinds.end()) throw ConfigError("unknown source kind '" + std::string(text) + "'");
  return it->second;
}

std::vector<std::string> RelationSource::harvest_entities(const Entity&, const std::string&,
                                                          HarvestDirection) {
  return {};
}

std::vector<std::string> FixtureSuggestionClient::complete(const std::string& query) {
  seen_.push_back(query);
  auto it = answers_.find(query);
  return it == answers_.end() ? std::vector<std::string>{} : it->second;
}

namespace {

void push_unique(std::vector<RelationPhrase>& out, std::set<std::string>& seen,
                 std::string_view raw, const std::string& source) {
  if (auto p = make_phrase(raw, source); p && seen.insert(p->text).second) {
    out.push_back(std::move(*p));
  }
}

std::string regex_escape(const std::string& text) {
  static const std::regex special(R"([.^$|()\[\]{}*+?\\])");
  return std::regex_replace(text, special, R"(\$&)");
}

std::string alternation(const std::vector<std::string>& forms) {
  // Longest first so "electrons" wins over "electron" at the same position.
  std::vector<std::string> sorted = forms;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() > b.size() : a < b; });
  std::string out = "(?:";
  for (std::size_t i = 0; i < sorted.size(); ++i) out += (i ? "|" : "") + regex_escape(sorted[i]);
  return out + ")";
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

bool is_article(const std::string& token) { return token == "a" || token == "an" || token == "the"; }

// Number of tokens of the longest surface form that `tokens` starts with (at `from`).
std::size_t match_prefix(const std::vector<std::string>& tokens, std::size_t from, const Entity& e) {
  std::size_t best = 0;
  for (const auto& form : e.surface_forms()) {
    const auto ft = tokenize(form);
    if (ft.empty() || from + ft.size() > tokens.size()) continue;
    if (std::equal(ft.begin(), ft.end(), tokens.begin() + static_cast<std::ptrdiff_t>(from))) {
      best = std::max(best, ft.size());
    }
  }
  return best;
}

std::size_t match_suffix(const std::vector<std::string>& tokens, const Entity& e) {
  std::size_t best = 0;
  for (const auto& form : e.surface_forms()) {
    const auto ft = tokenize(form);
    if (ft.empty() || ft.size() > tokens.size()) continue;
    if (std::equal(ft.rbegin(), ft.rend(), tokens.rbegin())) best = std::max(best, ft.size());
  }
  return best;
}

std::string join(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) out += (i > begin ? " " : "") + tokens[i];
  return out;
}

// Middle text of "<x> <middle> <y>", or nullopt.
std::optional<std::string> sentence_middle(const std::vector<std::string>& tokens, const Entity& first,
                                           const Entity& last) {
  std::size_t start = 0;
  if (!tokens.empty() && is_article(tokens[0])) start = 1;
  const auto head_len = match_prefix(tokens, start, first);
  if (head_len == 0) return std::nullopt;
  const auto tail_len = match_suffix(tokens, last);
  if (tail_len == 0) return std::nullopt;
  const auto mid_begin = start + head_len;
  if (tokens.size() < tail_len || mid_begin >= tokens.size() - tail_len) return std::nullopt;
  return join(tokens, mid_begin, tokens.size() - tail_len);
}

}  // namespace

std::vector<RelationPhrase> triple_lookup(const Entity& head, const Entity& tail,
                                          const TripleStore& store, const std::string& source_id) {
  const std::set<std::string> tail_forms(tail.surface_forms().begin(), tail.surface_forms().end());
  std::vector<RelationPhrase> out;
  std::set<std::string> seen;
  for (const auto& form : head.surface_forms()) {
    for (const auto& t : store.by_subject(form)) {
      if (!tail_forms.count(t.object)) continue;
      if (auto p = make_phrase(t.predicate, source_id, t.score); p && seen.insert(p->text).second) {
        out.push_back(std::move(*p));
      }
    }
  }
  return out;
}

const std::vector<std::string>& autocomplete_questions() {
  static const std::vector<std::string> questions{"why do",  "why is",  "why does", "why does it",
                                                  "why did", "how do",  "how is",   "how does",
                                                  "how does it", "how did"};
  return questions;
}

const std::vector<std::string>& autocomplete_prefixes() {
  static const std::vector<std::string> prefixes{"", "a", "an", "the"};
  return prefixes;
}

std::optional<std::string> match_completion(const std::string& query, const std::string& completion,
                                            const Entity& tail) {
  const std::string text = normalize_text(completion);
  const std::regex pattern("^" + regex_escape(query) + " (.+?) " + alternation(tail.surface_forms()) +
                           R"((?:[^a-z0-9]|$))");
  std::smatch m;
  if (!std::regex_search(text, m, pattern)) return std::nullopt;
  auto middle = normalize_phrase(m[1].str());
  if (middle.empty()) return std::nullopt;
  return middle;
}

std::vector<RelationPhrase> autocomplete_harvest(const Entity& head, const Entity& tail,
                                                 SuggestionClient& client,
                                                 const AutocompleteOptions& options,
                                                 const std::string& source_id) {
  AutocompleteSource source(source_id, std::shared_ptr<SuggestionClient>(&client, [](auto*) {}),
                            options, false);
  std::vector<RelationPhrase> out;
  std::set<std::string> seen;
  for (const auto& text : source.query(head, tail).forward) push_unique(out, seen, text, source_id);
  return out;
}

AutocompleteSource::AutocompleteSource(std::string id, std::shared_ptr<SuggestionClient> client,
                                       AutocompleteOptions options, bool networked,
                                       std::map<std::string, std::string> config)
    : RelationSource(std::move(id), SourceKind::Autocomplete, std::move(config)),
      client_(std::move(client)),
      options_(std::move(options)),
      networked_(networked) {}

std::vector<std::string> AutocompleteSource::complete_with_backoff(const std::string& query) {
  auto delay = options_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    try {
      return client_->complete(query);
    } catch (const ThrottledError& e) {
      if (attempt >= options_.max_retries) {
        warn(options_.warnings, id() + ": throttled on '" + query + "', skipping (" + e.what() + ")");
        return {};
      }
      if (options_.sleep) {
        options_.sleep(delay);
      } else {
        std::this_thread::sleep_for(delay);
      }
      delay *= 2;
    }
  }
}

SourceAnswer AutocompleteSource::query(const Entity& head, const Entity& tail) {
  SourceAnswer answer;
  std::set<std::string> seen;
  for (const auto& question : autocomplete_questions()) {
    for (const auto& prefix : autocomplete_prefixes()) {
      for (const auto& form : head.surface_forms()) {
        const std::string q = question + " " + (prefix.empty() ? "" : prefix + " ") + form;
        for (const auto& completion : complete_with_backoff(q)) {
          if (auto middle = match_completion(q, completion, tail); middle && seen.insert(*middle).second) {
            answer.forward.push_back(*middle);
          }
        }
      }
    }
  }
  return answer;
}

std::vector<std::string> AutocompleteSource::harvest_entities(const Entity& known,
                                                              const std::string& relation,
                                                              HarvestDirection direction) {
  std::vector<std::string> out;
  const std::string rel = normalize_phrase(relation);
  for (const auto& question : autocomplete_questions()) {
    for (const auto& prefix : autocomplete_prefixes()) {
      const std::string lead = question + (prefix.empty() ? "" : " " + prefix);
      if (direction == HarvestDirection::KnownIsHead) {
        // "<question> [prefix] <known> <relation> <entity>"
        for (const auto& form : known.surface_forms()) {
          const std::string q = lead + " " + form + " " + rel;
          const std::regex pattern("^" + regex_escape(q) + R"( (?:(?:the|a|an) )?([a-z0-9' -]+?)\s*$)");
          for (const auto& completion : complete_with_backoff(q)) {
            std::smatch m;
            const auto text = normalize_phrase(completion);
            if (std::regex_match(text, m, pattern)) out.push_back(normalize_phrase(m[1].str()));
          }
        }
      } else {
        // "<question> [prefix] <entity> <relation> [article] <known>"
        const std::regex pattern("^" + regex_escape(lead) + " (.+?) " + regex_escape(rel) +
                                 " (?:(?:the|a|an) )?" + alternation(known.surface_forms()) + "$");
        for (const auto& completion : complete_with_backoff(lead)) {
          std::smatch m;
          const auto text = normalize_phrase(completion);
          if (std::regex_match(text, m, pattern)) out.push_back(normalize_phrase(m[1].str()));
        }
      }
    }
  }
  out.erase(std::remove(out.begin(), out.end(), std::string{}), out.end());
  return out;
}

// ---------------------------------------------------------------------------

const std::string& default_relation_prompt() {
  static const std::string prompt =
      "Q: What are the relations between a blizzard and snowflake?\n"
      "A: A blizzard produces snowflakes.\n"
      "A: A blizzard contains a lot of snowflakes.\n"
      "\n"
      "Q: What are the relations between an umbrella and rain?\n"
      "A: An umbrella protects from rain.\n"
      "A: An umbrella provides adequate protection from rain.\n"
      "\n"
      "Q: What are the relations between a movie and screen?\n"
      "A: A movie displayed on a screen.\n"
      "A: A movie can be shown on a screen.\n"
      "\n"
      "Q: What are the relations between Newton and gravity?\n"
      "A: Newton discovered gravity.\n"
      "A: Newton invented gravity.\n"
      "\n"
      "Q: What are the relations between an electron and nucleus?\n"
      "A: An electron revolves around the nucleus.\n"
      "A: An electron is much smaller than the nucleus.\n"
      "A: An electron attracts the nucleus.\n"
      "\n"
      "Q: What are the relations between water and a pipe?\n"
      "A: Water flows through the pipe.\n"
      "A: Water passes through the pipe.\n"
      "\n"
      "Q: What are the relations between {head} and {tail}?\n";
  return prompt;
}

std::string load_prompt_template(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read prompt template " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (text.find("{head}") == std::string::npos || text.find("{tail}") == std::string::npos) {
    throw ConfigError("prompt template " + path.string() + " lacks {head}/{tail} placeholders");
  }
  return text;
}

std::string render_prompt(const std::string& prompt_template, const Entity& head, const Entity& tail) {
  std::string out = prompt_template;
  auto replace_all = [&out](const std::string& slot, const std::string& value) {
    for (auto pos = out.find(slot); pos != std::string::npos; pos = out.find(slot, pos + value.size())) {
      out.replace(pos, slot.size(), value);
    }
  };
  replace_all("{head}", head.name());
  replace_all("{tail}", tail.name());
  return out;
}

DirectedPhrases parse_generative_answer(const std::string& completion, const Entity& head,
                                        const Entity& tail, const std::string& source_id,
                                        const WarningSink& warnings) {
  DirectedPhrases out;
  std::set<std::string> seen_fwd;
  std::set<std::string> seen_bwd;
  std::istringstream lines(completion);
  std::string line;
  while (std::getline(lines, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    // The model sometimes starts a new few-shot block on its own.
    if (line.rfind("Q:", 0) == 0) break;
    if (line.rfind("A:", 0) != 0) continue;
    const auto tokens = tokenize(normalize_phrase(line.substr(2)));
    if (auto mid = sentence_middle(tokens, head, tail)) {
      push_unique(out.forward, seen_fwd, *mid, source_id);
    } else if (auto rev = sentence_middle(tokens, tail, head)) {
      push_unique(out.backward, seen_bwd, *rev, source_id);
    } else {
      warn(warnings, source_id + ": discarded answer '" + line + "'");
    }
  }
  return out;
}

DirectedPhrases generative_relations(const Entity& head, const Entity& tail, CompletionClient& lm,
                                     const std::string& prompt_template, const std::string& source_id,
                                     const WarningSink& warnings) {
  const auto completion = lm.complete(render_prompt(prompt_template, head, tail));
  return parse_generative_answer(completion, head, tail, source_id, warnings);
}

// ---------------------------------------------------------------------------

TripleLookupSource::TripleLookupSource(std::string id, std::shared_ptr<const TripleStore> store,
                                       SourceKind kind, std::map<std::string, std::string> config)
    : RelationSource(std::move(id), kind, std::move(config)), store_(std::move(store)) {
  if (!store_) throw ConfigError("triple source '" + this->id() + "' has no store");
}

SourceAnswer TripleLookupSource::query(const Entity& head, const Entity& tail) {
  SourceAnswer answer;
  for (auto& p : triple_lookup(head, tail, *store_, id())) answer.forward.push_back(std::move(p.text));
  return answer;
}

std::vector<std::string> TripleLookupSource::harvest_entities(const Entity& known,
                                                              const std::string& relation,
                                                              HarvestDirection direction) {
  const std::string rel = normalize_phrase(relation);
  std::vector<std::string> out;
  for (const auto& form : known.surface_forms()) {
    const auto triples = direction == HarvestDirection::KnownIsHead ? store_->by_subject(form)
                                                                    : store_->by_object(form);
    for (const auto& t : triples) {
      if (t.predicate != rel) continue;
      out.push_back(direction == HarvestDirection::KnownIsHead ? t.object : t.subject);
    }
  }
  return out;
}

GenerativeSource::GenerativeSource(std::string id, std::shared_ptr<CompletionClient> lm,
                                   std::string prompt_template, bool networked,
                                   std::map<std::string, std::string> config, WarningSink warnings)
    : RelationSource(std::move(id), SourceKind::GenerativeLm, std::move(config)),
      lm_(std::move(lm)),
      prompt_template_(std::move(prompt_template)),
      networked_(networked),
      warnings_(std::move(warnings)) {}

SourceAnswer GenerativeSource::query(const Entity& head, const Entity& tail) {
  auto phrases = generative_relations(head, tail, *lm_, prompt_template_, id(), warnings_);
  SourceAnswer answer;
  for (auto& p : phrases.forward) answer.forward.push_back(std::move(p.text));
  answer.reverse.emplace();
  for (auto& p : phrases.backward) answer.reverse->push_back(std::move(p.text));
  return answer;
}

SourceAnswer ReplaySource::query(const Entity& head, const Entity& tail) {
  throw SourceUnavailableError(id() + " is replay-only; no snapshot entry for (" + head.name() + ", " +
                               tail.name() + ")");
}

std::vector<std::string> ReplaySource::harvest_entities(const Entity& known, const std::string& relation,
                                                        HarvestDirection) {
  throw SourceUnavailableError(id() + " is replay-only; no snapshot entry for (" + known.name() + ", " +
                               relation + ")");
}

}  // namespace relmap
