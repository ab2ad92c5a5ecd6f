#include "relmap/serialize.hpp"

#include <cstdio>
#include <sstream>

namespace relmap {
namespace {

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

json evidence_to_json(const DirectionalEvidence& d) {
  json edges = json::array();
  for (const auto& e : d.edges) {
    edges.push_back({{"base_cluster", e.base_label},
                     {"target_cluster", e.target_label},
                     {"weight", e.weight},
                     {"base_phrase", e.base_phrase},
                     {"target_phrase", e.target_phrase}});
  }
  return {{"direction", d.direction == Direction::Forward ? "forward" : "backward"},
          {"score", d.score},
          {"edges", edges}};
}

json clusters_to_json(const std::vector<RelationCluster>& clusters) {
  json out = json::array();
  for (const auto& c : clusters) {
    json members = json::array();
    for (const auto& m : c.members) members.push_back({{"text", m.text}, {"source", m.source}});
    out.push_back({{"representative", c.representative.text}, {"members", members}});
  }
  return out;
}

json detail_to_json(const DirectionalDetail& d, const RelationSet& base, const RelationSet& target) {
  auto rels = [](const RelationSet& s) {
    json a = json::array();
    for (const auto& r : s.relations()) a.push_back({{"text", r.text}, {"source", r.source}});
    return a;
  };
  json matching = json::array();
  for (const auto& e : d.matching) {
    matching.push_back({{"base_cluster", d.graph.base_clusters[e.row].representative.text},
                        {"target_cluster", d.graph.target_clusters[e.col].representative.text},
                        {"weight", e.weight}});
  }
  return {{"base_pair", {base.head().name(), base.tail().name()}},
          {"target_pair", {target.head().name(), target.tail().name()}},
          {"base_relations", rels(base)},
          {"target_relations", rels(target)},
          {"base_clusters", clusters_to_json(d.graph.base_clusters)},
          {"target_clusters", clusters_to_json(d.graph.target_clusters)},
          {"edge_weights", d.graph.weights},
          {"matching", matching},
          {"matching_weight", d.matching_weight},
          {"retained", evidence_to_json(d.evidence)}};
}

// Mapped (base index, target index) pairs of a mapping in table coordinates.
std::vector<std::pair<std::size_t, std::size_t>> indexed(const Mapping& m, const PairTable& table) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& a : m.pairs()) out.emplace_back(table.base_index(a.base), table.target_index(a.target));
  return out;
}

// Entry for (b_x, b_y) -> (t_x, t_y) as stored, with a flag telling whether the
// stored orientation is reversed relative to the request.
std::pair<const PairSimilarity*, bool> stored(const PairTable& table, std::size_t bx, std::size_t tx, std::size_t by,
                                              std::size_t ty) {
  if (bx < by) return {&table.entry(bx, by, tx, ty), false};
  return {&table.entry(by, bx, ty, tx), true};
}

}  // namespace

json mapping_to_json(const Mapping& mapping) {
  json pairs = json::array();
  for (const auto& a : mapping.pairs()) pairs.push_back({{"base", a.base}, {"target", a.target}});
  return {{"pairs", pairs},
          {"unmapped_base", mapping.unmapped_base()},
          {"unmapped_target", mapping.unmapped_target()},
          {"score", mapping.total_score()}};
}

Mapping mapping_from_json(const json& j) {
  try {
    std::vector<Assignment> pairs;
    std::vector<std::string> base = j.at("unmapped_base").get<std::vector<std::string>>();
    std::vector<std::string> target = j.at("unmapped_target").get<std::vector<std::string>>();
    for (const auto& p : j.at("pairs")) {
      pairs.push_back({p.at("base").get<std::string>(), p.at("target").get<std::string>()});
      base.push_back(pairs.back().base);
      target.push_back(pairs.back().target);
    }
    return Mapping(std::move(pairs), base, target, j.at("score").get<double>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed mapping: ") + e.what());
  } catch (const InputError& e) {
    throw ParseError(std::string("invalid mapping: ") + e.what());
  }
}

json pair_similarity_to_json(const PairSimilarity& s) {
  return {{"base_pair", {s.base_pair.first, s.base_pair.second}},
          {"target_pair", {s.target_pair.first, s.target_pair.second}},
          {"score", s.score},
          {"evidence", {evidence_to_json(s.evidence[0]), evidence_to_json(s.evidence[1])}}};
}

json explanation_to_json(const Explanation& x) {
  return {{"sim_star", pair_similarity_to_json(x.similarity)},
          {"forward", detail_to_json(x.forward, x.base_forward, x.target_forward)},
          {"backward", detail_to_json(x.backward, x.base_backward, x.target_backward)}};
}

json map_result_to_json(const MapResult& result) {
  json base = json::array(), target = json::array(), ranked = json::array();
  for (const auto& e : result.base) base.push_back(e.name());
  for (const auto& e : result.target) target.push_back(e.name());
  for (std::size_t r = 0; r < result.ranked.size(); ++r) {
    const auto& m = result.ranked[r];
    json terms = json::array();
    const auto idx = indexed(m, result.table);
    for (std::size_t x = 0; x < idx.size(); ++x) {
      for (std::size_t y = x + 1; y < idx.size(); ++y) {
        const auto [entry, reversed] = stored(result.table, idx[x].first, idx[x].second, idx[y].first, idx[y].second);
        (void)reversed;
        if (entry->score > 0.0) terms.push_back(pair_similarity_to_json(*entry));
      }
    }
    json jm = mapping_to_json(m);
    jm["rank"] = r + 1;
    jm["terms"] = terms;
    ranked.push_back(std::move(jm));
  }
  return {{"base", base}, {"target", target}, {"mappings", ranked}};
}

std::string map_result_to_text(const MapResult& result, std::size_t limit) {
  std::ostringstream out;
  for (std::size_t r = 0; r < result.ranked.size() && r < limit; ++r) {
    const auto& m = result.ranked[r];
    out << '#' << (r + 1) << "  score " << fixed(m.total_score()) << '\n';
    if (m.empty()) out << "  (no mapping)\n";
    for (const auto& a : m.pairs()) out << "  " << a.base << " -> " << a.target << '\n';
    for (const auto& b : m.unmapped_base()) out << "  " << b << " -> (unmapped)\n";
    if (!m.unmapped_target().empty()) {
      out << "  unused targets:";
      for (const auto& t : m.unmapped_target()) out << ' ' << t;
      out << '\n';
    }
  }
  return out.str();
}

std::string mapping_to_dot(const Mapping& mapping, const PairTable& table) {
  std::ostringstream out;
  out << "digraph mapping {\n  rankdir=LR;\n  node [shape=box, style=rounded];\n";
  auto node = [](const Assignment& a) { return a.base + "→" + a.target; };
  for (const auto& a : mapping.pairs()) out << "  " << dot_quote(node(a)) << ";\n";

  const auto idx = indexed(mapping, table);
  const auto& pairs = mapping.pairs();
  for (std::size_t x = 0; x < idx.size(); ++x) {
    for (std::size_t y = x + 1; y < idx.size(); ++y) {
      const auto [entry, reversed] = stored(table, idx[x].first, idx[x].second, idx[y].first, idx[y].second);
      // evidence[0] relates (first, second) of the stored pair in that order.
      const auto& from_x = reversed ? entry->evidence[1] : entry->evidence[0];
      const auto& from_y = reversed ? entry->evidence[0] : entry->evidence[1];
      for (const auto& [ev, src, dst] : {std::tuple{&from_x, &pairs[x], &pairs[y]},
                                         std::tuple{&from_y, &pairs[y], &pairs[x]}}) {
        if (!(ev->score > 0.0)) continue;
        std::string label;
        for (std::size_t e = 0; e < ev->edges.size() && e < 2; ++e) {
          if (e) label += '\n';
          label += ev->edges[e].base_phrase + " ~ " + ev->edges[e].target_phrase;
        }
        label += '\n' + fixed(ev->score, 2);
        out << "  " << dot_quote(node(*src)) << " -> " << dot_quote(node(*dst)) << " [label=" << dot_quote(label)
            << ", penwidth=" << fixed(2.0 * ev->score, 3) << "];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

std::string explanation_to_text(const Explanation& x) {
  std::ostringstream out;
  const auto& s = x.similarity;
  out << "sim*(" << s.base_pair.first << ", " << s.base_pair.second << " | " << s.target_pair.first << ", "
      << s.target_pair.second << ") = " << fixed(s.score) << '\n';
  auto direction = [&](const char* name, const DirectionalDetail& d, const RelationSet& b, const RelationSet& t) {
    out << name << ": R(" << b.head().name() << ", " << b.tail().name() << ") ~ R(" << t.head().name() << ", "
        << t.tail().name() << ") = " << fixed(d.evidence.score) << '\n';
    out << "  base clusters:";
    for (const auto& c : d.graph.base_clusters) out << " [" << c.representative.text << " x" << c.members.size() << ']';
    out << "\n  target clusters:";
    for (const auto& c : d.graph.target_clusters) out << " [" << c.representative.text << " x" << c.members.size() << ']';
    out << '\n';
    for (const auto& e : d.evidence.edges) {
      out << "  " << e.base_label << " <-> " << e.target_label << "  " << fixed(e.weight) << "  (" << e.base_phrase
          << " ~ " << e.target_phrase << ")\n";
    }
  };
  direction("forward", x.forward, x.base_forward, x.target_forward);
  direction("backward", x.backward, x.base_backward, x.target_backward);
  return out.str();
}

}  // namespace relmap
