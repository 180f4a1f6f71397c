#pragma once

// API usage graphs: directed labeled multigraphs of one intra-procedural
// API usage. Data nodes are objects and constants, action nodes are calls
// and control markers. Nodes are identified by position.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace changerule {

enum class NodeKind { Data, Action };

enum class EdgeFamily { ControlFlow, DataFlow, Transform };

enum class EdgeLabel : std::uint8_t { Sel, Order, Finally, Recv, Para, Def, Transform };

inline constexpr std::array<EdgeLabel, 7> kAllEdgeLabels = {
    EdgeLabel::Sel,  EdgeLabel::Order, EdgeLabel::Finally,  EdgeLabel::Recv,
    EdgeLabel::Para, EdgeLabel::Def,   EdgeLabel::Transform};

constexpr EdgeFamily family_of(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::Sel:
    case EdgeLabel::Order:
    case EdgeLabel::Finally:
      return EdgeFamily::ControlFlow;
    case EdgeLabel::Recv:
    case EdgeLabel::Para:
    case EdgeLabel::Def:
      return EdgeFamily::DataFlow;
    case EdgeLabel::Transform:
      break;
  }
  return EdgeFamily::Transform;
}

constexpr std::string_view to_string(EdgeLabel label) {
  switch (label) {
    case EdgeLabel::Sel: return "sel";
    case EdgeLabel::Order: return "order";
    case EdgeLabel::Finally: return "finally";
    case EdgeLabel::Recv: return "recv";
    case EdgeLabel::Para: return "para";
    case EdgeLabel::Def: return "def";
    case EdgeLabel::Transform: return "transform";
  }
  return "?";
}

inline std::optional<EdgeLabel> parse_edge_label(std::string_view text) {
  for (EdgeLabel l : kAllEdgeLabels)
    if (to_string(l) == text) return l;
  return std::nullopt;
}

constexpr std::string_view to_string(NodeKind kind) {
  return kind == NodeKind::Data ? "data" : "action";
}

/// Set of edge labels, used to restrict graph algorithms to a sub-relation.
class LabelSet {
 public:
  constexpr LabelSet() = default;
  constexpr LabelSet(std::initializer_list<EdgeLabel> labels) {
    for (EdgeLabel l : labels) bits_ |= bit(l);
  }
  static constexpr LabelSet all() {
    LabelSet s;
    s.bits_ = 0x7f;
    return s;
  }
  static constexpr LabelSet of_family(EdgeFamily family) {
    LabelSet s;
    for (EdgeLabel l : kAllEdgeLabels)
      if (family_of(l) == family) s.bits_ |= bit(l);
    return s;
  }
  constexpr bool contains(EdgeLabel l) const { return (bits_ & bit(l)) != 0; }

 private:
  static constexpr std::uint8_t bit(EdgeLabel l) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(l));
  }
  std::uint8_t bits_ = 0;
};

inline constexpr std::string_view kUnknownLabel = "UNKNOWN";
inline constexpr std::string_view kEpsilonLabel = "<eps>";
inline constexpr std::string_view kReturnLabel = "<return>";

struct GraphNode {
  NodeKind kind = NodeKind::Data;
  std::string label;
  std::string api_type;

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

inline GraphNode epsilon_node() { return {NodeKind::Data, std::string(kEpsilonLabel), {}}; }

inline bool is_epsilon(const GraphNode& n) {
  return n.kind == NodeKind::Data && n.label == kEpsilonLabel;
}

struct GraphEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  EdgeLabel label = EdgeLabel::Order;

  friend auto operator<=>(const GraphEdge&, const GraphEdge&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One method's usage graph. Parallel edges are allowed only when their
/// labels differ; adding an existing (source, target, label) triple is a
/// no-op, so feature counting over the graph stays deterministic.
class UsageGraph {
 public:
  UsageGraph() = default;
  explicit UsageGraph(std::string method_id) : method_id_(std::move(method_id)) {}

  const std::string& method_id() const { return method_id_; }
  void set_method_id(std::string id) { method_id_ = std::move(id); }

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }
  const GraphNode& node(std::size_t i) const { return nodes_.at(i); }

  std::size_t add_node(GraphNode n) {
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }
  std::size_t add_node(NodeKind kind, std::string label, std::string api_type = {}) {
    return add_node(GraphNode{kind, std::move(label), std::move(api_type)});
  }

  /// Returns false when the triple was already present.
  bool add_edge(std::size_t source, std::size_t target, EdgeLabel label) {
    GraphEdge e{source, target, label};
    if (!index_.insert(e).second) return false;
    edges_.push_back(e);
    return true;
  }
  bool add_edge(const GraphEdge& e) { return add_edge(e.source, e.target, e.label); }

  bool has_edge(std::size_t source, std::size_t target, EdgeLabel label) const {
    return index_.count(GraphEdge{source, target, label}) != 0;
  }

  std::size_t count_edges(LabelSet labels) const {
    return static_cast<std::size_t>(std::count_if(
        edges_.begin(), edges_.end(), [&](const GraphEdge& e) { return labels.contains(e.label); }));
  }

  /// Keeps only edges for which pred returns true; preserves relative order.
  template <typename Pred>
  void retain_edges(Pred pred) {
    std::vector<GraphEdge> kept;
    kept.reserve(edges_.size());
    index_.clear();
    for (const GraphEdge& e : edges_)
      if (pred(e)) {
        kept.push_back(e);
        index_.insert(e);
      }
    edges_ = std::move(kept);
  }

  friend bool operator==(const UsageGraph& a, const UsageGraph& b) {
    return a.method_id_ == b.method_id_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::string method_id_;
  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::set<GraphEdge> index_;
};

/// Subgraph induced by `keep` (in the given order); node i of the result is
/// node keep[i] of g. Edges whose endpoints are not both kept are dropped.
inline UsageGraph induced_subgraph(const UsageGraph& g, const std::vector<std::size_t>& keep) {
  std::vector<std::optional<std::size_t>> remap(g.node_count());
  UsageGraph out(g.method_id());
  for (std::size_t v : keep) {
    remap.at(v) = out.add_node(g.node(v));
  }
  for (const GraphEdge& e : g.edges())
    if (remap[e.source] && remap[e.target]) out.add_edge(*remap[e.source], *remap[e.target], e.label);
  return out;
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string what;
  std::optional<std::size_t> node;
  std::optional<std::size_t> edge;

  friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

namespace detail {

inline bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '$';
}

// "Type.method()" or "Type.<init>": a dotted identifier chain whose last
// segment is either a call "name()" or the constructor marker.
inline bool looks_like_call(std::string_view label) {
  if (label.empty() || !(std::isalpha(static_cast<unsigned char>(label[0])) || label[0] == '_'))
    return false;
  std::string_view tail;
  if (label.size() > 7 && label.substr(label.size() - 7) == ".<init>") {
    tail = label.substr(0, label.size() - 7);
  } else if (label.size() > 2 && label.substr(label.size() - 2) == "()") {
    tail = label.substr(0, label.size() - 2);
  } else {
    return false;
  }
  if (tail.empty() || tail.back() == '.') return false;
  for (char c : tail)
    if (!is_ident_char(c) && c != '.') return false;
  return true;
}

}  // namespace detail

/// Lists every violated structural invariant. An empty report means the
/// graph is well formed.
inline ValidationReport validate(const UsageGraph& g) {
  ValidationReport report;
  const std::size_t n = g.node_count();
  for (std::size_t i = 0; i < n; ++i) {
    const GraphNode& node = g.node(i);
    if (node.label.empty()) report.push_back({"empty node label", i, {}});
    if (node.kind == NodeKind::Data && detail::looks_like_call(node.label))
      report.push_back({"call label on data node", i, {}});
    if (node.kind == NodeKind::Action && node.label == kUnknownLabel)
      report.push_back({"UNKNOWN label on action node", i, {}});
    if (!node.api_type.empty()) {
      const std::string& t = node.api_type;
      if (t.front() == '.' || t.back() == '.' || t.find("..") != std::string::npos ||
          t.find_first_of(" \t\r\n") != std::string::npos)
        report.push_back({"malformed api_type", i, {}});
    }
  }
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const GraphEdge& e = g.edges()[k];
    if (e.source >= n || e.target >= n) {
      report.push_back({"dangling edge", {}, k});
      continue;
    }
    if (e.label == EdgeLabel::Order) {
      if (e.source == e.target) report.push_back({"self-loop order edge", {}, k});
      if (g.node(e.source).kind != NodeKind::Action || g.node(e.target).kind != NodeKind::Action)
        report.push_back({"order edge between non-action nodes", {}, k});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Order-edge algorithms

namespace detail {

inline std::vector<std::vector<std::size_t>> successors(const UsageGraph& g, LabelSet labels) {
  std::vector<std::vector<std::size_t>> succ(g.node_count());
  for (const GraphEdge& e : g.edges())
    if (labels.contains(e.label)) succ[e.source].push_back(e.target);
  for (auto& s : succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return succ;
}

// Kahn's algorithm; returns nullopt when the relation has a cycle.
inline std::optional<std::vector<std::size_t>> topological_order(
    const std::vector<std::vector<std::size_t>>& succ) {
  const std::size_t n = succ.size();
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& s : succ)
    for (std::size_t t : s) ++indeg[t];
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) order.push_back(v);
  for (std::size_t head = 0; head < order.size(); ++head)
    for (std::size_t t : succ[order[head]])
      if (--indeg[t] == 0) order.push_back(t);
  if (order.size() != n) return std::nullopt;
  return order;
}

/// Dense bit rows; row v holds the nodes reachable from v by one or more steps.
class ReachMatrix {
 public:
  explicit ReachMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}
  bool test(std::size_t from, std::size_t to) const {
    return (bits_[from * words_ + to / 64] >> (to % 64)) & 1u;
  }
  void set(std::size_t from, std::size_t to) { bits_[from * words_ + to / 64] |= (1ull << (to % 64)); }
  void merge_row(std::size_t into, std::size_t from) {
    for (std::size_t w = 0; w < words_; ++w) bits_[into * words_ + w] |= bits_[from * words_ + w];
  }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

inline ReachMatrix reachability(const std::vector<std::vector<std::size_t>>& succ,
                                const std::vector<std::size_t>& topo) {
  ReachMatrix reach(succ.size());
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    for (std::size_t t : succ[*it]) {
      reach.set(*it, t);
      reach.merge_row(*it, t);
    }
  }
  return reach;
}

}  // namespace detail

/// True iff the graph restricted to edges with labels in `labels` has no
/// directed cycle. Self-loops count as cycles.
inline bool is_acyclic(const UsageGraph& g, LabelSet labels) {
  return detail::topological_order(detail::successors(g, labels)).has_value();
}

/// Adds order edges until the order relation is transitively closed.
/// Throws GraphError if the order relation is cyclic.
inline UsageGraph order_closure(const UsageGraph& g) {
  const auto succ = detail::successors(g, {EdgeLabel::Order});
  const auto topo = detail::topological_order(succ);
  if (!topo) throw GraphError("order relation of '" + g.method_id() + "' is cyclic");
  const auto reach = detail::reachability(succ, *topo);
  UsageGraph out = g;
  for (std::size_t u = 0; u < g.node_count(); ++u)
    for (std::size_t v = 0; v < g.node_count(); ++v)
      if (reach.test(u, v)) out.add_edge(u, v, EdgeLabel::Order);
  return out;
}

/// Minimum equivalent graph of the order relation. For an acyclic order
/// relation the result keeps exactly those order edges u->v that are not
/// implied by another order path u->w->...->v. Cyclic inputs are returned
/// unchanged. Non-order edges are never touched.
inline UsageGraph transitive_reduce_order(const UsageGraph& g) {
  const auto succ = detail::successors(g, {EdgeLabel::Order});
  const auto topo = detail::topological_order(succ);
  if (!topo) return g;
  const auto reach = detail::reachability(succ, *topo);
  UsageGraph out = g;
  out.retain_edges([&](const GraphEdge& e) {
    if (e.label != EdgeLabel::Order) return true;
    for (std::size_t w : succ[e.source])
      if (w != e.target && reach.test(w, e.target)) return false;
    return true;
  });
  return out;
}

}  // namespace changerule
