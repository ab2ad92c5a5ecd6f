#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "relmap/engine.hpp"
#include "relmap/mapping_types.hpp"

namespace relmap {

using json = nlohmann::json;

/// {"pairs":[{"base","target"}], "unmapped_base":[...], "unmapped_target":[...], "score": s}
json mapping_to_json(const Mapping& mapping);
/// Inverse of mapping_to_json. Throws ParseError on malformed input.
Mapping mapping_from_json(const json& j);

json pair_similarity_to_json(const PairSimilarity& s);
json explanation_to_json(const Explanation& x);

/// Ranked mappings plus, for each of them, the sim* terms that make up its score.
json map_result_to_json(const MapResult& result);

/// Plain listing of the ranked mappings.
std::string map_result_to_text(const MapResult& result, std::size_t limit = 3);

/// Graphviz digraph of one mapping: a node per assignment ("sun→nucleus"), and for
/// every two assignments with positive evidence one edge per direction, labelled
/// with at most two matched relations and the directional score. Pen width is
/// proportional to that score.
std::string mapping_to_dot(const Mapping& mapping, const PairTable& table);

std::string explanation_to_text(const Explanation& x);

}  // namespace relmap
