#pragma once

// Rule file: {"origin": {...}, "misuse": graph, "fix": graph,
//             "transform": [[m, f], ...], "provenance": [{misuse, fix, cost}]}

#include <string>

#include "changerule/graph_io.hpp"
#include "changerule/rule_inference.hpp"

namespace changerule {

inline nlohmann::json rule_to_json(const ChangeRule& r) {
  nlohmann::json doc;
  doc["origin"] = {{"method_id", r.origin.method_id}, {"commit", r.origin.commit}};
  doc["misuse"] = graph_to_json(r.misuse);
  doc["fix"] = graph_to_json(r.fix);
  doc["transform"] = nlohmann::json::array();
  for (const auto& [m, f] : r.transform) doc["transform"].push_back({m, f});
  doc["provenance"] = nlohmann::json::array();
  for (const MappedPair& p : r.provenance) {
    nlohmann::json j;
    j["misuse"] = p.misuse ? nlohmann::json(*p.misuse) : nlohmann::json(nullptr);
    j["fix"] = p.fix ? nlohmann::json(*p.fix) : nlohmann::json(nullptr);
    j["cost"] = p.cost;
    doc["provenance"].push_back(std::move(j));
  }
  return doc;
}

inline ChangeRule rule_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw FormatError("rule document must be an object", "");
  ChangeRule r;
  if (doc.contains("origin")) {
    const auto& o = doc["origin"];
    r.origin.method_id = o.value("method_id", "");
    r.origin.commit = o.value("commit", "");
  }
  r.misuse = graph_from_json(detail::require(doc, "misuse", ""), "/misuse");
  r.fix = graph_from_json(detail::require(doc, "fix", ""), "/fix");
  if (doc.contains("transform")) {
    const auto& t = doc["transform"];
    for (std::size_t k = 0; k < t.size(); ++k) {
      const std::string where = "/transform/" + std::to_string(k);
      if (!t[k].is_array() || t[k].size() != 2 || !t[k][0].is_number_unsigned() || !t[k][1].is_number_unsigned())
        throw FormatError("transform entry must be a pair of node indices", where);
      const std::size_t m = t[k][0], f = t[k][1];
      if (m >= r.misuse.node_count() || f >= r.fix.node_count()) throw FormatError("dangling transform", where);
      r.transform.emplace_back(m, f);
    }
  }
  if (doc.contains("provenance")) {
    for (const auto& j : doc["provenance"]) {
      MappedPair p;
      if (j.contains("misuse") && !j["misuse"].is_null()) p.misuse = j["misuse"].get<std::size_t>();
      if (j.contains("fix") && !j["fix"].is_null()) p.fix = j["fix"].get<std::size_t>();
      p.cost = j.value("cost", Cost{0});
      r.provenance.push_back(p);
    }
  }
  return r;
}

inline ChangeRule load_rule(const std::string& path) { return rule_from_json(parse_json_text(read_text_file(path))); }

inline void save_rule(const std::string& path, const ChangeRule& r) {
  write_text_file(path, rule_to_json(r).dump(2) + "\n");
}

}  // namespace changerule
