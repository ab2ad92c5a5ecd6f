#pragma once

#include <filesystem>
#include <set>
#include <string>

#include "relmap/acquisition.hpp"

namespace relmap {

/// Reads a source definition file:
///
///   {"sources": [
///     {"id": "openie", "kind": "TRIPLE_LOOKUP", "config": {"path": "openie.tsv"}},
///     {"id": "qpp", "kind": "AUTOCOMPLETE", "config": {"endpoint": "http://host:port",
///                                                     "path": "/complete", "param": "q"}},
///     {"id": "lm", "kind": "GENERATIVE_LM", "config": {"endpoint": "http://host:port",
///         "model": "...", "prompt_template": "prompt.txt", "api_key_env": "LM_API_KEY"}}
///   ]}
///
/// Relative paths resolve against the file's directory. Triple-backed kinds
/// (TRIPLE_LOOKUP, CONCEPT_GRAPH_API, LOCAL_KB) need "path"; the others need "endpoint".
SourceList load_sources(const std::filesystem::path& path, const WarningSink& warnings = {});

/// Adds a replay-only source for every snapshot source id not already present.
void add_replay_sources(SourceList& sources, const Snapshot& snapshot);

/// Drops sources whose id is in `disabled`.
SourceList without_sources(const SourceList& sources, const std::set<std::string>& disabled);

}  // namespace relmap
