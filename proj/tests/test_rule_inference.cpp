#include <gtest/gtest.h>

#include <algorithm>

#include "changerule/frontend/aug_builder.hpp"
#include "changerule/graph_io.hpp"
#include "changerule/rule_inference.hpp"
#include "changerule/rule_io.hpp"
#include "oracles.hpp"

using namespace changerule;

namespace {

std::string data_file(const std::string& name) { return read_text_file(std::string(TEST_DATA_DIR) + "/" + name); }

std::multiset<std::string> labels(const UsageGraph& g) {
  std::multiset<std::string> out;
  for (const auto& n : g.nodes()) out.insert(n.label);
  return out;
}

bool has_label(const UsageGraph& g, const std::string& label) {
  return std::any_of(g.nodes().begin(), g.nodes().end(), [&](const GraphNode& n) { return n.label == label; });
}

std::optional<std::size_t> index_of(const UsageGraph& g, const std::string& label) {
  for (std::size_t i = 0; i < g.node_count(); ++i)
    if (g.node(i).label == label) return i;
  return std::nullopt;
}

UsageGraph build(const char* body) {
  std::string src = "package p; import q.Res; import q.Log; class C { void m(Res r, Log log) { ";
  src += body;
  src += " } }";
  return frontend::build_aug_from_source(src, "m");
}

}  // namespace

TEST(NodeCost, RelabelAndEdgeEdits) {
  UsageGraph m, c;
  m.add_node(NodeKind::Data, "A");
  m.add_node(NodeKind::Action, "A.f()");
  m.add_edge(0, 1, EdgeLabel::Recv);
  c.add_node(NodeKind::Data, "B");
  c.add_node(NodeKind::Action, "A.f()");
  c.add_edge(0, 1, EdgeLabel::Para);
  const auto me = incident_labels(m), ce = incident_labels(c);
  EXPECT_EQ(node_cost(&m.node(0), &me[0], &c.node(0), &ce[0]), 1 + 2);  // relabel + recv vs para
  EXPECT_EQ(node_cost(&m.node(1), &me[1], &c.node(1), &ce[1]), 2);
  EXPECT_EQ(node_cost(&m.node(1), &me[1], nullptr, nullptr), 1 + 1);
  EXPECT_EQ(node_cost(nullptr, nullptr, nullptr, nullptr), 0);
}

TEST(MapNodes, TotalCostIsOptimal) {
  oracle::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    auto m = oracle::random_graph(rng, {0, 5});
    auto c = oracle::random_graph(rng, {0, 5});
    const CostMatrix costs = cost_matrix(m, c);
    std::vector<std::vector<std::int64_t>> raw(costs.size(), std::vector<std::int64_t>(costs.size()));
    for (std::size_t r = 0; r < costs.size(); ++r)
      for (std::size_t k = 0; k < costs.size(); ++k) raw[r][k] = costs(r, k);
    EXPECT_EQ(map_nodes(m, c).total_cost, oracle::brute_min_assignment(raw));
  }
}

TEST(BuildChangeRule, IdentityIsEmpty) {
  oracle::Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    auto g = oracle::random_graph(rng, {0, 8});
    auto r = build_change_rule(g, g);
    EXPECT_TRUE(r.empty());
    EXPECT_TRUE(r.transform.empty());
  }
}

TEST(BuildChangeRule, AddedCallAppearsAgainstEpsilon) {
  auto m = build("r.open(); r.read();");
  auto c = build("r.open(); r.read(); r.close();");
  auto rule = build_change_rule(m, c);
  ASSERT_EQ(rule.misuse.node_count(), rule.fix.node_count());
  const auto k = index_of(rule.fix, "Res.close()");
  ASSERT_TRUE(k);
  EXPECT_TRUE(is_epsilon(rule.misuse.node(*k)));
  // the receiver joins through the single hop
  const auto recv = index_of(rule.fix, "Res");
  ASSERT_TRUE(recv);
  EXPECT_EQ(rule.misuse.node(*recv).label, "Res");
  EXPECT_TRUE(rule.fix.has_edge(*recv, *k, EdgeLabel::Recv));
  // transforms link real pairs only, index to index
  for (auto [a, b] : rule.transform) {
    EXPECT_EQ(a, b);
    EXPECT_FALSE(is_epsilon(rule.misuse.node(a)));
    EXPECT_FALSE(is_epsilon(rule.fix.node(b)));
  }
  EXPECT_FALSE(std::any_of(rule.transform.begin(), rule.transform.end(),
                           [&](auto p) { return p.first == *k; }));
}

TEST(BuildChangeRule, SingleHopAddsParameterAndResultData) {
  // only the call's order position changes; its data neighbours do not
  auto m = build("String s = r.get(log); r.check();");
  auto c = build("r.check(); String s = r.get(log);");
  auto rule = build_change_rule(m, c);
  EXPECT_TRUE(has_label(rule.fix, "Log"));
  EXPECT_TRUE(has_label(rule.fix, "String"));
}

TEST(BuildChangeRule, FinallyNeighboursAreAdded) {
  auto m = build("try { r.read(); } finally { log.flush(); }");
  auto c = build("try { r.read(); r.validate(); } finally { log.flush(); }");
  auto rule = build_change_rule(m, c);
  const auto v = index_of(rule.fix, "Res.validate()");
  const auto f = index_of(rule.fix, "Log.flush()");
  ASSERT_TRUE(v);
  ASSERT_TRUE(f);
  EXPECT_TRUE(rule.fix.has_edge(*v, *f, EdgeLabel::Finally));
}

TEST(BuildChangeRule, PostSingleHopFollowsOutgoingDataFlow) {
  // Cfg joins by the single hop, Res.<init> as its outgoing data-flow
  // target; Res would need a second hop
  UsageGraph m, c;
  for (UsageGraph* g : {&m, &c}) {
    g->add_node(NodeKind::Data, "Cfg");          // 0
    g->add_node(NodeKind::Action, "Res.<init>");  // 1
    g->add_node(NodeKind::Data, "Res");          // 2
    g->add_edge(0, 1, EdgeLabel::Para);
    g->add_edge(1, 2, EdgeLabel::Def);
  }
  m.add_node(NodeKind::Action, "Cfg.load()");  // 3
  m.add_edge(0, 3, EdgeLabel::Recv);
  c.add_node(NodeKind::Action, "Cfg.reload()");
  c.add_edge(0, 3, EdgeLabel::Recv);
  auto rule = build_change_rule(m, c);
  EXPECT_TRUE(has_label(rule.misuse, "Cfg"));
  EXPECT_TRUE(has_label(rule.misuse, "Res.<init>"));
  EXPECT_FALSE(has_label(rule.misuse, "Res"));
}

TEST(BuildChangeRule, OrderEdgesAreReduced) {
  auto m = build("r.a(); r.b(); r.c(); r.d();");
  auto c = build("r.a(); r.b(); r.c(); r.d(); r.e();");
  auto rule = build_change_rule(m, c);
  for (const UsageGraph* side : {&rule.misuse, &rule.fix}) {
    const auto order = oracle::edges_with(*side, EdgeLabel::Order);
    const auto megs = oracle::brute_meg(side->node_count(), order);
    ASSERT_EQ(megs.size(), 1u);
    const std::set<std::pair<std::size_t, std::size_t>> got(order.begin(), order.end());
    EXPECT_EQ(got, megs[0]);
  }
}

TEST(BuildChangeRule, SwappedRolesMirrorLabels) {
  auto m = frontend::build_aug_from_source(data_file("listing1_misuse.java"), "handle");
  auto c = frontend::build_aug_from_source(data_file("listing1_fix.java"), "handle");
  auto forward = build_change_rule(m, c);
  auto backward = build_change_rule(c, m);
  EXPECT_EQ(labels(forward.misuse), labels(backward.fix));
  EXPECT_EQ(labels(forward.fix), labels(backward.misuse));
}

TEST(RuleIo, RoundTrip) {
  auto m = build("r.open();");
  auto c = build("r.open(); r.close();");
  auto rule = build_change_rule(m, c, {"entry-1", "abc123"});
  auto back = rule_from_json(parse_json_text(rule_to_json(rule).dump()));
  EXPECT_EQ(back.misuse, rule.misuse);
  EXPECT_EQ(back.fix, rule.fix);
  EXPECT_EQ(back.transform, rule.transform);
  EXPECT_EQ(back.provenance, rule.provenance);
  EXPECT_EQ(back.origin, rule.origin);
}
