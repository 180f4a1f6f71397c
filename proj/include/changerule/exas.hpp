#pragma once

// Exas structural feature vectors.
//
// Features are (p,q)-nodes (label, in-degree, out-degree) and n-paths: the
// label sequence of a simple directed path of 2 to 4 nodes, interleaved with
// the labels of the traversed edges, e.g. [Foo, para, Object.<init>].
// Degrees count all edges of the graph as passed in. Epsilon placeholders
// (rule-side holes) contribute no features.

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "changerule/graph.hpp"

namespace changerule {

inline constexpr std::size_t kMinPathNodes = 2;
inline constexpr std::size_t kMaxPathNodes = 4;

struct FeatureKey {
  enum class Kind : std::uint8_t { PQNode, NPath };

  Kind kind = Kind::PQNode;
  /// PQNode: {label}; NPath: {node, edge, node, ..., node}.
  std::vector<std::string> tokens;
  int in_degree = 0;
  int out_degree = 0;

  static FeatureKey pq(std::string label, int p, int q) { return {Kind::PQNode, {std::move(label)}, p, q}; }
  static FeatureKey path(std::vector<std::string> tokens) { return {Kind::NPath, std::move(tokens), 0, 0}; }

  std::size_t path_nodes() const { return kind == Kind::NPath ? (tokens.size() + 1) / 2 : 1; }

  friend auto operator<=>(const FeatureKey&, const FeatureKey&) = default;
  friend bool operator==(const FeatureKey&, const FeatureKey&) = default;
};

inline std::string to_string(const FeatureKey& k) {
  if (k.kind == FeatureKey::Kind::PQNode)
    return k.tokens.front() + "-" + std::to_string(k.in_degree) + "-" + std::to_string(k.out_degree);
  std::string s = "[";
  for (std::size_t i = 0; i < k.tokens.size(); ++i) s += (i ? ", " : "") + k.tokens[i];
  return s + "]";
}

struct FeatureEntry {
  long count = 0;
  /// Some node on some occurrence of the feature has a non-empty api_type.
  bool api = false;

  friend bool operator==(const FeatureEntry&, const FeatureEntry&) = default;
};

/// Sparse feature -> count map; only features with count >= 1 are stored.
class ExasVector {
 public:
  using Map = std::map<FeatureKey, FeatureEntry>;

  void add(const FeatureKey& key, bool api, long times = 1) {
    FeatureEntry& e = entries_[key];
    e.count += times;
    e.api = e.api || api;
  }

  const Map& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  long count(const FeatureKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.count;
  }

  /// Entries with api flag set.
  ExasVector api_only() const {
    ExasVector out;
    for (const auto& [k, e] : entries_)
      if (e.api) out.entries_.emplace_hint(out.entries_.end(), k, e);
    return out;
  }

  /// Every count replaced by 1.
  ExasVector indicator() const {
    ExasVector out = *this;
    for (auto& [k, e] : out.entries_) e.count = 1;
    return out;
  }

  friend bool operator==(const ExasVector&, const ExasVector&) = default;

 private:
  Map entries_;
};

inline ExasVector filter_api_features(const ExasVector& v) { return v.api_only(); }
inline ExasVector to_indicator(const ExasVector& v) { return v.indicator(); }

namespace detail {

struct PathWalker {
  const UsageGraph& g;
  const std::vector<std::vector<std::size_t>>& out_edges;  // edge indices by source
  ExasVector& vec;
  std::vector<std::size_t> nodes;
  std::vector<std::string> tokens;
  std::vector<char> on_path;

  void extend(bool api) {
    const std::size_t last = nodes.back();
    for (std::size_t ei : out_edges[last]) {
      const GraphEdge& e = g.edges()[ei];
      if (on_path[e.target] || is_epsilon(g.node(e.target))) continue;
      const GraphNode& t = g.node(e.target);
      const bool path_api = api || !t.api_type.empty();
      nodes.push_back(e.target);
      on_path[e.target] = 1;
      tokens.push_back(std::string(to_string(e.label)));
      tokens.push_back(t.label);
      vec.add(FeatureKey::path(tokens), path_api);
      if (nodes.size() < kMaxPathNodes) extend(path_api);
      tokens.resize(tokens.size() - 2);
      on_path[e.target] = 0;
      nodes.pop_back();
    }
  }
};

}  // namespace detail

inline ExasVector vectorize(const UsageGraph& g) {
  ExasVector vec;
  const std::size_t n = g.node_count();
  std::vector<int> in(n, 0), out(n, 0);
  std::vector<std::vector<std::size_t>> out_edges(n);
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const GraphEdge& e = g.edges()[k];
    ++out[e.source];
    ++in[e.target];
    out_edges[e.source].push_back(k);
  }
  for (std::size_t v = 0; v < n; ++v) {
    const GraphNode& node = g.node(v);
    if (is_epsilon(node)) continue;
    vec.add(FeatureKey::pq(node.label, in[v], out[v]), !node.api_type.empty());
  }
  detail::PathWalker walker{g, out_edges, vec, {}, {}, std::vector<char>(n, 0)};
  for (std::size_t v = 0; v < n; ++v) {
    const GraphNode& node = g.node(v);
    if (is_epsilon(node)) continue;
    walker.nodes = {v};
    walker.tokens = {node.label};
    walker.on_path[v] = 1;
    walker.extend(!node.api_type.empty());
    walker.on_path[v] = 0;
  }
  return vec;
}

// ---------------------------------------------------------------------------
// API-specific splitting

inline constexpr std::string_view kMiscGroup = "<misc>";

/// Up to the first three segments of the package part of an API type;
/// "<misc>" for bare class names and unresolved types.
inline std::string split_group(std::string_view api_type) {
  auto last_dot = api_type.rfind('.');
  if (api_type.empty() || last_dot == std::string_view::npos) return std::string(kMiscGroup);
  std::string_view package = api_type.substr(0, last_dot);
  std::size_t end = 0;
  for (int seg = 0; seg < 3; ++seg) {
    auto dot = package.find('.', end);
    if (dot == std::string_view::npos) return std::string(package);
    end = dot + 1;
  }
  return std::string(package.substr(0, end - 1));
}

/// Partitions the nodes by split_group; each group keeps only its internal
/// edges and is labeled (method_id) with the group name.
inline std::map<std::string, UsageGraph> split_graph(const UsageGraph& g) {
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t v = 0; v < g.node_count(); ++v) members[split_group(g.node(v).api_type)].push_back(v);
  std::map<std::string, UsageGraph> out;
  for (auto& [group, nodes] : members) {
    UsageGraph sub = induced_subgraph(g, nodes);
    sub.set_method_id(group);
    out.emplace(group, std::move(sub));
  }
  return out;
}

}  // namespace changerule
