#pragma once

// Graph interchange document, one graph per file:
//
//   { "method_id": "...",
//     "nodes": [ {"kind": "data"|"action", "label": "...", "api_type": "..."} ],
//     "edges": [ {"src": 0, "dst": 1, "label": "order"} ] }
//
// Node indices are implicit by array position.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "changerule/graph.hpp"

namespace changerule {

/// Malformed document. `position` is a byte offset for syntax errors and a
/// JSON pointer (e.g. "/edges/3/label") for schema errors.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& message, std::string position)
      : std::runtime_error(message + " at " + position), position_(std::move(position)) {}
  const std::string& position() const { return position_; }

 private:
  std::string position_;
};

inline nlohmann::json graph_to_json(const UsageGraph& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const GraphNode& n : g.nodes())
    nodes.push_back({{"kind", to_string(n.kind)}, {"label", n.label}, {"api_type", n.api_type}});
  nlohmann::json edges = nlohmann::json::array();
  for (const GraphEdge& e : g.edges())
    edges.push_back({{"src", e.source}, {"dst", e.target}, {"label", to_string(e.label)}});
  return {{"method_id", g.method_id()}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                                     const std::string& where) {
  if (!obj.is_object()) throw FormatError("expected object", where);
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(std::string("missing field '") + key + "'", where);
  return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) throw FormatError(std::string("field '") + key + "' must be a string", where + "/" + key);
  return v.get<std::string>();
}

inline std::size_t require_index(const nlohmann::json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number_unsigned())
    throw FormatError(std::string("field '") + key + "' must be a non-negative integer", where + "/" + key);
  return v.get<std::size_t>();
}

}  // namespace detail

/// `where` is the JSON pointer of `doc` inside an enclosing document.
inline UsageGraph graph_from_json(const nlohmann::json& doc, const std::string& where = "") {
  if (!doc.is_object()) throw FormatError("graph document must be an object", where.empty() ? "/" : where);
  UsageGraph g;
  if (auto it = doc.find("method_id"); it != doc.end()) {
    if (!it->is_string()) throw FormatError("field 'method_id' must be a string", where + "/method_id");
    g.set_method_id(it->get<std::string>());
  }
  const auto& nodes = detail::require(doc, "nodes", where);
  if (!nodes.is_array()) throw FormatError("'nodes' must be an array", where + "/nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string at = where + "/nodes/" + std::to_string(i);
    const std::string kind = detail::require_string(nodes[i], "kind", at);
    GraphNode n;
    if (kind == "data") {
      n.kind = NodeKind::Data;
    } else if (kind == "action") {
      n.kind = NodeKind::Action;
    } else {
      throw FormatError("unknown node kind '" + kind + "'", at + "/kind");
    }
    n.label = detail::require_string(nodes[i], "label", at);
    if (nodes[i].contains("api_type")) n.api_type = detail::require_string(nodes[i], "api_type", at);
    g.add_node(std::move(n));
  }
  if (auto it = doc.find("edges"); it != doc.end()) {
    if (!it->is_array()) throw FormatError("'edges' must be an array", where + "/edges");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const auto& e = (*it)[k];
      const std::string at = where + "/edges/" + std::to_string(k);
      const std::size_t src = detail::require_index(e, "src", at);
      const std::size_t dst = detail::require_index(e, "dst", at);
      const std::string name = detail::require_string(e, "label", at);
      const auto label = parse_edge_label(name);
      if (!label) throw FormatError("unknown edge label '" + name + "'", at + "/label");
      if (src >= g.node_count() || dst >= g.node_count())
        throw FormatError("dangling edge", at);
      g.add_edge(src, dst, *label);
    }
  }
  return g;
}

inline nlohmann::json parse_json_text(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(e.what(), "byte " + std::to_string(e.byte));
  }
}

inline std::string serialize(const UsageGraph& g) { return graph_to_json(g).dump(2) + "\n"; }

inline UsageGraph deserialize(const std::string& text) { return graph_from_json(parse_json_text(text)); }

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

inline UsageGraph load_graph(const std::string& path) { return deserialize(read_text_file(path)); }

inline void save_graph(const std::string& path, const UsageGraph& g) { write_text_file(path, serialize(g)); }

}  // namespace changerule
