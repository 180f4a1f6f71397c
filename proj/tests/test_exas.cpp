#include <gtest/gtest.h>

#include "changerule/exas.hpp"
#include "oracles.hpp"

using namespace changerule;

namespace {

oracle::Features as_oracle(const ExasVector& v) {
  oracle::Features f;
  for (const auto& [k, e] : v.entries()) {
    if (k.kind == FeatureKey::Kind::PQNode) {
      f.pq[{k.tokens[0], k.in_degree, k.out_degree}] = e.count;
      f.pq_api[{k.tokens[0], k.in_degree, k.out_degree}] = e.api;
    } else {
      f.paths[k.tokens] = e.count;
      f.path_api[k.tokens] = e.api;
    }
  }
  return f;
}

}  // namespace

TEST(Vectorize, SingleEdge) {
  UsageGraph g;
  g.add_node(NodeKind::Data, "a");
  g.add_node(NodeKind::Action, "b");
  g.add_edge(0, 1, EdgeLabel::Para);
  auto v = vectorize(g);
  EXPECT_EQ(v.size(), 3u);
  EXPECT_EQ(v.count(FeatureKey::pq("a", 0, 1)), 1);
  EXPECT_EQ(v.count(FeatureKey::pq("b", 1, 0)), 1);
  EXPECT_EQ(v.count(FeatureKey::path({"a", "para", "b"})), 1);
}

TEST(Vectorize, EmptyGraph) { EXPECT_TRUE(vectorize(UsageGraph()).empty()); }

TEST(Vectorize, Chain) {
  UsageGraph g;
  for (const char* l : {"a", "b", "c"}) g.add_node(NodeKind::Action, l);
  g.add_edge(0, 1, EdgeLabel::Order);
  g.add_edge(1, 2, EdgeLabel::Order);
  auto v = vectorize(g);
  std::size_t two = 0, three = 0, pq = 0;
  for (const auto& [k, e] : v.entries()) {
    if (k.kind == FeatureKey::Kind::PQNode) pq += e.count;
    else if (k.path_nodes() == 2) two += e.count;
    else if (k.path_nodes() == 3) three += e.count;
  }
  EXPECT_EQ(two, 2u);
  EXPECT_EQ(three, 1u);
  EXPECT_EQ(pq, 3u);
}

TEST(Vectorize, ParallelEdgesGiveDistinctPaths) {
  UsageGraph g;
  g.add_node(NodeKind::Data, "Foo");
  g.add_node(NodeKind::Action, "Foo.f()");
  g.add_edge(0, 1, EdgeLabel::Recv);
  g.add_edge(0, 1, EdgeLabel::Para);
  auto v = vectorize(g);
  EXPECT_EQ(v.count(FeatureKey::path({"Foo", "recv", "Foo.f()"})), 1);
  EXPECT_EQ(v.count(FeatureKey::path({"Foo", "para", "Foo.f()"})), 1);
  EXPECT_EQ(v.count(FeatureKey::pq("Foo", 0, 2)), 1);
}

TEST(Vectorize, CyclesTerminateWithSimplePaths) {
  UsageGraph g;
  g.add_node(NodeKind::Action, "a");
  g.add_node(NodeKind::Action, "b");
  g.add_edge(0, 1, EdgeLabel::Order);
  g.add_edge(1, 0, EdgeLabel::Order);
  auto v = vectorize(g);
  EXPECT_EQ(v.count(FeatureKey::path({"a", "order", "b"})), 1);
  EXPECT_EQ(v.count(FeatureKey::path({"b", "order", "a"})), 1);
  EXPECT_EQ(v.size(), 4u);
}

TEST(Vectorize, EpsilonNodesContributeNothing) {
  UsageGraph g;
  g.add_node(NodeKind::Data, "a");
  g.add_node(epsilon_node());
  EXPECT_EQ(vectorize(g).size(), 1u);
}

TEST(Vectorize, MatchesExhaustiveEnumeration) {
  oracle::Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    auto g = oracle::random_graph(rng, {0, 6, 0.45});
    auto got = as_oracle(vectorize(g));
    auto want = oracle::enumerate_features(g);
    EXPECT_EQ(got.pq, want.pq);
    EXPECT_EQ(got.paths, want.paths);
    EXPECT_EQ(got.pq_api, want.pq_api);
    EXPECT_EQ(got.path_api, want.path_api);
  }
}

TEST(Vectorize, PermutationInvariant) {
  oracle::Rng rng(22);
  for (int i = 0; i < 100; ++i) {
    auto g = oracle::random_graph(rng);
    EXPECT_EQ(vectorize(g), vectorize(oracle::permuted(g, rng)));
  }
}

TEST(FilterApi, KeepsFlaggedSubset) {
  UsageGraph g;
  g.add_node(NodeKind::Data, "Baz", "de.example.api.Baz");
  g.add_node(NodeKind::Action, "Baz.f()");
  g.add_node(NodeKind::Data, "int");
  g.add_edge(0, 1, EdgeLabel::Recv);
  g.add_edge(2, 1, EdgeLabel::Para);
  auto v = vectorize(g);
  auto api = filter_api_features(v);
  EXPECT_LT(api.size(), v.size());
  for (const auto& [k, e] : api.entries()) {
    EXPECT_TRUE(e.api);
    EXPECT_EQ(v.count(k), e.count);
    EXPECT_NE(std::find(k.tokens.begin(), k.tokens.end(), "Baz"), k.tokens.end());
  }
  UsageGraph plain;
  plain.add_node(NodeKind::Data, "int");
  EXPECT_TRUE(filter_api_features(vectorize(plain)).empty());
}

TEST(ToIndicator, ReplacesCounts) {
  ExasVector v;
  v.add(FeatureKey::pq("f", 0, 0), false, 7);
  v.add(FeatureKey::pq("g", 0, 0), true, 1);
  auto ind = to_indicator(v);
  EXPECT_EQ(ind.count(FeatureKey::pq("f", 0, 0)), 1);
  EXPECT_EQ(ind.count(FeatureKey::pq("g", 0, 0)), 1);
  EXPECT_EQ(to_indicator(ind), ind);
  EXPECT_TRUE(to_indicator(ExasVector()).empty());
}

TEST(SplitGroup, TruncatesPackage) {
  EXPECT_EQ(split_group("java.lang.Object"), "java.lang");
  EXPECT_EQ(split_group("java.util.List"), "java.util");
  EXPECT_EQ(split_group("org.apache.commons.io.File"), "org.apache.commons");
  EXPECT_EQ(split_group("a.b.c.D"), "a.b.c");
  EXPECT_EQ(split_group("Foo"), "<misc>");
  EXPECT_EQ(split_group(""), "<misc>");
}

TEST(SplitGraph, PartitionsNodes) {
  oracle::Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    auto g = oracle::random_graph(rng);
    auto parts = split_graph(g);
    std::size_t nodes = 0, edges = 0;
    for (const auto& [label, sub] : parts) {
      EXPECT_EQ(sub.method_id(), label);
      nodes += sub.node_count();
      edges += sub.edge_count();
      for (const auto& n : sub.nodes()) EXPECT_EQ(split_group(n.api_type), label);
    }
    EXPECT_EQ(nodes, g.node_count());
    EXPECT_LE(edges, g.edge_count());
  }
}

TEST(SplitGraph, SamePackageSharesGroup) {
  UsageGraph g;
  g.add_node(NodeKind::Data, "List", "java.util.List");
  g.add_node(NodeKind::Data, "Map", "java.util.Map");
  g.add_node(NodeKind::Data, "x");
  g.add_edge(0, 1, EdgeLabel::Para);
  g.add_edge(0, 2, EdgeLabel::Para);
  auto parts = split_graph(g);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts.at("java.util").node_count(), 2u);
  EXPECT_EQ(parts.at("java.util").edge_count(), 1u);
  EXPECT_EQ(parts.at("<misc>").node_count(), 1u);
}
