#pragma once

// Change-rule inference from a misuse graph and its fixed counterpart.
//
//   1. pad the smaller graph with edge-less epsilon nodes
//   2. cost(v_m, v_c) = relabel + incoming/outgoing edge-label edits
//   3. minimum-cost node mapping (kuhn_munkres)
//   4. keep pairs with cost > 0
//   5. single-hop: add pairs of data-flow (either direction) and finally
//      neighbors of kept real nodes
//   6. post-single-hop: add pairs of outgoing data-flow targets of the
//      nodes added in step 5 (one pass)
//   7. reduce order edges on both sides to a minimum equivalent graph
//   8. link real/real pairs with transform edges
//
// Both rule sides have one node per kept pair, in the same order, so node k
// of the misuse side and node k of the fix side come from the same pair. A
// side with no real node for a pair carries an epsilon node there.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "changerule/assignment.hpp"
#include "changerule/graph.hpp"

namespace changerule {

struct MappedPair {
  std::optional<std::size_t> misuse;  // index in aug_m, nullopt = epsilon
  std::optional<std::size_t> fix;     // index in aug_c, nullopt = epsilon
  Cost cost = 0;

  friend bool operator==(const MappedPair&, const MappedPair&) = default;
};

/// One-to-one node mapping between two graphs. Epsilon/epsilon pairs from
/// padding are not recorded.
struct NodeMapping {
  std::vector<MappedPair> pairs;
  Cost total_cost = 0;

  /// Pair index for a real node of either side.
  std::optional<std::size_t> pair_of_misuse(std::size_t v) const { return find(v, &MappedPair::misuse); }
  std::optional<std::size_t> pair_of_fix(std::size_t v) const { return find(v, &MappedPair::fix); }

 private:
  std::optional<std::size_t> find(std::size_t v, std::optional<std::size_t> MappedPair::*side) const {
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (pairs[i].*side == v) return i;
    return std::nullopt;
  }
};

struct RuleOrigin {
  std::string method_id;
  std::string commit;

  friend bool operator==(const RuleOrigin&, const RuleOrigin&) = default;
};

struct ChangeRule {
  UsageGraph misuse;
  UsageGraph fix;
  /// (misuse node, fix node) pairs linked by transform edges; real nodes only.
  std::vector<std::pair<std::size_t, std::size_t>> transform;
  /// Source pair of rule node k (same index on both sides).
  std::vector<MappedPair> provenance;
  RuleOrigin origin;

  bool empty() const { return misuse.empty() && fix.empty(); }
};

// ---------------------------------------------------------------------------
// Node cost

/// Multisets of incident edge labels of one node.
struct IncidentLabels {
  std::vector<EdgeLabel> incoming;
  std::vector<EdgeLabel> outgoing;
};

inline std::vector<IncidentLabels> incident_labels(const UsageGraph& g) {
  std::vector<IncidentLabels> out(g.node_count());
  for (const GraphEdge& e : g.edges()) {
    out[e.source].outgoing.push_back(e.label);
    out[e.target].incoming.push_back(e.label);
  }
  for (auto& il : out) {
    std::sort(il.incoming.begin(), il.incoming.end());
    std::sort(il.outgoing.begin(), il.outgoing.end());
  }
  return out;
}

namespace detail {

inline Cost multiset_symmetric_difference(const std::vector<EdgeLabel>& a, const std::vector<EdgeLabel>& b) {
  std::vector<EdgeLabel> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  return static_cast<Cost>(diff.size());
}

}  // namespace detail

/// Edit count between two nodes; nullptr stands for an epsilon node.
inline Cost node_cost(const GraphNode* m, const IncidentLabels* m_edges, const GraphNode* c,
                      const IncidentLabels* c_edges) {
  if (!m && !c) return 0;
  if (!m || !c) {
    const IncidentLabels& real = m ? *m_edges : *c_edges;
    return 1 + static_cast<Cost>(real.incoming.size() + real.outgoing.size());
  }
  return (m->label != c->label ? 1 : 0) +
         detail::multiset_symmetric_difference(m_edges->incoming, c_edges->incoming) +
         detail::multiset_symmetric_difference(m_edges->outgoing, c_edges->outgoing);
}

// ---------------------------------------------------------------------------
// Steps

/// Pads the graph with fewer nodes with edge-less epsilon nodes.
inline std::pair<UsageGraph, UsageGraph> equalize(UsageGraph m, UsageGraph c) {
  while (m.node_count() < c.node_count()) m.add_node(epsilon_node());
  while (c.node_count() < m.node_count()) c.add_node(epsilon_node());
  return {std::move(m), std::move(c)};
}

/// Cost matrix over the padded node sets; padded indices are epsilon.
inline CostMatrix cost_matrix(const UsageGraph& m, const UsageGraph& c) {
  const std::size_t n = std::max(m.node_count(), c.node_count());
  const auto m_edges = incident_labels(m);
  const auto c_edges = incident_labels(c);
  CostMatrix costs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool mi = i < m.node_count();
    for (std::size_t j = 0; j < n; ++j) {
      const bool cj = j < c.node_count();
      costs(i, j) = node_cost(mi ? &m.node(i) : nullptr, mi ? &m_edges[i] : nullptr, cj ? &c.node(j) : nullptr,
                              cj ? &c_edges[j] : nullptr);
    }
  }
  return costs;
}

/// Minimum-cost mapping between the real nodes of m and c.
inline NodeMapping map_nodes(const UsageGraph& m, const UsageGraph& c) {
  const CostMatrix costs = cost_matrix(m, c);
  const Assignment a = kuhn_munkres(costs);
  NodeMapping mapping;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    const std::size_t j = a.column_of_row[i];
    MappedPair p;
    if (i < m.node_count()) p.misuse = i;
    if (j < c.node_count()) p.fix = j;
    if (!p.misuse && !p.fix) continue;
    p.cost = costs(i, j);
    mapping.pairs.push_back(p);
    mapping.total_cost += p.cost;
  }
  return mapping;
}

/// Rule in progress: the ordered set of kept pair indices.
class RuleSelection {
 public:
  explicit RuleSelection(const NodeMapping& mapping) : mapping_(&mapping), kept_(mapping.pairs.size(), 0) {}

  bool contains(std::size_t pair) const { return kept_[pair] != 0; }
  bool add(std::size_t pair) {
    if (kept_[pair]) return false;
    kept_[pair] = 1;
    order_.push_back(pair);
    return true;
  }
  const std::vector<std::size_t>& pairs() const { return order_; }
  const NodeMapping& mapping() const { return *mapping_; }

 private:
  const NodeMapping* mapping_;
  std::vector<char> kept_;
  std::vector<std::size_t> order_;
};

/// Pairs with cost > 0.
inline RuleSelection extract_changed(const NodeMapping& mapping) {
  RuleSelection sel(mapping);
  for (std::size_t i = 0; i < mapping.pairs.size(); ++i)
    if (mapping.pairs[i].cost > 0) sel.add(i);
  return sel;
}

namespace detail {

inline bool is_single_hop_edge(EdgeLabel l) {
  return family_of(l) == EdgeFamily::DataFlow || l == EdgeLabel::Finally;
}

// Pairs reachable from the real node `v` of one side along edges accepted by
// `accept(edge, v_is_source)`.
template <typename Accept, typename PairOf>
void collect_neighbors(const UsageGraph& g, std::size_t v, Accept accept, PairOf pair_of,
                       std::vector<std::size_t>& out) {
  for (const GraphEdge& e : g.edges()) {
    if (e.source == v && accept(e, true)) {
      if (auto p = pair_of(e.target)) out.push_back(*p);
    } else if (e.target == v && accept(e, false)) {
      if (auto p = pair_of(e.source)) out.push_back(*p);
    }
  }
}

}  // namespace detail

/// Adds the pairs of every data-flow (either direction) or finally neighbor
/// of the currently kept nodes. Returns the newly added pair indices.
inline std::vector<std::size_t> single_hop_extend(RuleSelection& sel, const UsageGraph& m, const UsageGraph& c) {
  const NodeMapping& mapping = sel.mapping();
  std::vector<std::size_t> candidates;
  auto accept = [](const GraphEdge& e, bool) { return detail::is_single_hop_edge(e.label); };
  auto pm = [&](std::size_t v) { return mapping.pair_of_misuse(v); };
  auto pc = [&](std::size_t v) { return mapping.pair_of_fix(v); };
  for (std::size_t p : std::vector<std::size_t>(sel.pairs())) {
    const MappedPair& pair = mapping.pairs[p];
    if (pair.misuse) detail::collect_neighbors(m, *pair.misuse, accept, pm, candidates);
    if (pair.fix) detail::collect_neighbors(c, *pair.fix, accept, pc, candidates);
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<std::size_t> added;
  for (std::size_t p : candidates)
    if (sel.add(p)) added.push_back(p);
  return added;
}

/// For each pair added by the single hop, adds the pairs of the targets of
/// its outgoing data-flow edges. One pass, no fixpoint.
inline std::vector<std::size_t> post_single_hop_extend(RuleSelection& sel, const std::vector<std::size_t>& single_hop,
                                                       const UsageGraph& m, const UsageGraph& c) {
  const NodeMapping& mapping = sel.mapping();
  std::vector<std::size_t> candidates;
  auto accept = [](const GraphEdge& e, bool outgoing) {
    return outgoing && family_of(e.label) == EdgeFamily::DataFlow;
  };
  auto pm = [&](std::size_t v) { return mapping.pair_of_misuse(v); };
  auto pc = [&](std::size_t v) { return mapping.pair_of_fix(v); };
  for (std::size_t p : single_hop) {
    const MappedPair& pair = mapping.pairs[p];
    if (pair.misuse) detail::collect_neighbors(m, *pair.misuse, accept, pm, candidates);
    if (pair.fix) detail::collect_neighbors(c, *pair.fix, accept, pc, candidates);
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<std::size_t> added;
  for (std::size_t p : candidates)
    if (sel.add(p)) added.push_back(p);
  return added;
}

namespace detail {

// Side graph over the kept pairs (sorted by pair index): real nodes from
// `g`, epsilon placeholders elsewhere, edges induced among real nodes.
inline UsageGraph materialize(const UsageGraph& g, const NodeMapping& mapping, const std::vector<std::size_t>& pairs,
                              std::optional<std::size_t> MappedPair::*side) {
  UsageGraph out(g.method_id());
  std::vector<std::optional<std::size_t>> remap(g.node_count());
  for (std::size_t p : pairs) {
    const auto& real = mapping.pairs[p].*side;
    if (real) {
      remap[*real] = out.add_node(g.node(*real));
    } else {
      out.add_node(epsilon_node());
    }
  }
  for (const GraphEdge& e : g.edges())
    if (remap[e.source] && remap[e.target]) out.add_edge(*remap[e.source], *remap[e.target], e.label);
  return out;
}

}  // namespace detail

/// Full inference pipeline. Both graphs are used as given (the front-end
/// already closes order edges, so order differences count as edits).
inline ChangeRule build_change_rule(const UsageGraph& aug_m, const UsageGraph& aug_c, RuleOrigin origin = {}) {
  const NodeMapping mapping = map_nodes(aug_m, aug_c);
  RuleSelection sel = extract_changed(mapping);
  const auto single_hop = single_hop_extend(sel, aug_m, aug_c);
  post_single_hop_extend(sel, single_hop, aug_m, aug_c);

  std::vector<std::size_t> pairs = sel.pairs();
  std::sort(pairs.begin(), pairs.end());

  ChangeRule rule;
  rule.origin = std::move(origin);
  rule.misuse = transitive_reduce_order(detail::materialize(aug_m, mapping, pairs, &MappedPair::misuse));
  rule.fix = transitive_reduce_order(detail::materialize(aug_c, mapping, pairs, &MappedPair::fix));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const MappedPair& p = mapping.pairs[pairs[k]];
    rule.provenance.push_back(p);
    if (p.misuse && p.fix) rule.transform.emplace_back(k, k);
  }
  return rule;
}

}  // namespace changerule
