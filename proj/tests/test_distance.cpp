#include <gtest/gtest.h>

#include "changerule/distance.hpp"
#include "oracles.hpp"

using namespace changerule;

namespace {

ExasVector vec(std::initializer_list<std::pair<const char*, long>> entries) {
  ExasVector v;
  for (auto [name, count] : entries) v.add(FeatureKey::pq(name, 0, 0), true, count);
  return v;
}

oracle::CountMap counts(const ExasVector& v) {
  oracle::CountMap m;
  for (const auto& [k, e] : v.entries()) m[to_string(k) + (k.kind == FeatureKey::Kind::NPath ? "#p" : "#q")] = e.count;
  return m;
}

}  // namespace

TEST(DistanceConfig, TwelveNamedVariants) {
  auto all = all_distance_configs();
  ASSERT_EQ(all.size(), 12u);
  std::set<std::string> names;
  for (const auto& c : all) names.insert(c.name());
  const std::set<std::string> want = {
      "ExasVectorL1Norm",          "ExasVectorCosine",          "ExasVectorSplitL1Norm",
      "ExasVectorSplitCosine",     "APIExasVectorL1Norm",       "APIExasVectorCosine",
      "APIExasVectorSplitL1Norm",  "APIExasVectorSplitCosine",  "IndicatorExasVector",
      "IndicatorExasVectorSplit",  "APIIndicatorExasVector",    "APIIndicatorExasVectorSplit"};
  EXPECT_EQ(names, want);
  for (const auto& n : want) EXPECT_EQ(distance_config(n).name(), n);
  EXPECT_THROW(distance_config("ExasVector"), std::invalid_argument);
}

TEST(FeatureDist, WorkedValues) {
  EXPECT_DOUBLE_EQ(feature_dist(vec({{"a", 1}}), vec({{"a", 3}})), 0.0);
  const auto a = vec({{"a", 1}, {"b", 1}, {"c", 1}});
  const auto b = vec({{"b", 1}, {"c", 1}, {"d", 1}, {"e", 1}});
  EXPECT_NEAR(feature_dist(a, b), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(feature_dist(a, b), oracle::set_term(counts(a), counts(b)), 1e-15);
  EXPECT_DOUBLE_EQ(feature_dist(vec({{"a", 1}}), vec({{"b", 1}})), 1.0);
  EXPECT_DOUBLE_EQ(feature_dist(ExasVector(), ExasVector()), 0.0);
  EXPECT_DOUBLE_EQ(feature_dist(ExasVector(), vec({{"b", 1}})), 1.0);
}

TEST(FeatureCountL1, WorkedValues) {
  EXPECT_DOUBLE_EQ(feature_count_l1({{3, 1}, {3, 1}}), 0.0);
  EXPECT_DOUBLE_EQ(feature_count_l1({{2, 1}, {0, 3}}), 1.0);
  EXPECT_DOUBLE_EQ(feature_count_l1({{}, {}}), 1.0);
  // (4,1,1) vs (1,1,2): diff (3,0,-1), scaled (1,0,1/3), L1 4/3 over 3 features
  EXPECT_NEAR(feature_count_l1({{4, 1, 1}, {1, 1, 2}}), 4.0 / 9.0, 1e-15);
}

TEST(FeatureCountCosine, WorkedValues) {
  EXPECT_DOUBLE_EQ(feature_count_cosine({{3, 1}, {3, 1}}), 0.0);
  EXPECT_NEAR(feature_count_cosine({{1, 2}, {2, 1}}), 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(feature_count_cosine({{}, {}}), 1.0);
  EXPECT_DOUBLE_EQ(feature_count_cosine({{2, 4}, {1, 2}}), 0.0);
}

TEST(CombinedDist, DisjointIsOne) {
  DistanceConfig cfg{Norm::L1, false, false, 0.5};
  EXPECT_DOUBLE_EQ(combined_vector_dist(vec({{"a", 1}}), vec({{"b", 1}}), cfg), 1.0);
}

TEST(CombinedDist, OneSharedFeatureIsAboutLambda) {
  DistanceConfig cfg{Norm::L1, false, false, 0.5};
  ExasVector a = vec({{"s", 2}}), b = vec({{"s", 2}});
  for (int i = 0; i < 200; ++i) {
    a.add(FeatureKey::pq("a" + std::to_string(i), 0, 0), true);
    b.add(FeatureKey::pq("b" + std::to_string(i), 0, 0), true);
  }
  EXPECT_NEAR(combined_vector_dist(a, b, cfg), 0.5, 0.01);
}

TEST(CombinedDist, MatchesFormulaOracle) {
  oracle::Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    auto ga = oracle::random_graph(rng), gb = oracle::random_graph(rng);
    const auto va = vectorize(ga), vb = vectorize(gb);
    const auto ca = counts(va), cb = counts(vb);
    const double lambda = 0.5;
    if (ca.empty() && cb.empty()) continue;
    const double l1 = lambda * oracle::set_term(ca, cb) + (1 - lambda) * oracle::l1_term(ca, cb);
    const double cos = lambda * oracle::set_term(ca, cb) + (1 - lambda) * oracle::cosine_term(ca, cb);
    EXPECT_NEAR(combined_dist(ga, gb, {Norm::L1, false, false, lambda}), l1, 1e-12);
    EXPECT_NEAR(combined_dist(ga, gb, {Norm::Cosine, false, false, lambda}), std::clamp(cos, 0.0, 1.0), 1e-12);
  }
}

TEST(AggregateSplit, WorkedValues) {
  EXPECT_NEAR(aggregate_split({0.3, 1.0, 0.5}), 0.4, 1e-15);
  EXPECT_DOUBLE_EQ(aggregate_split({1.0, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(aggregate_split({}), 0.0);
}

TEST(SplitDist, GroupMissingOnOneSideCountsAsDistinct) {
  UsageGraph a, b;
  a.add_node(NodeKind::Data, "List", "java.util.List");
  a.add_node(NodeKind::Data, "File", "java.io.File");
  b.add_node(NodeKind::Data, "List", "java.util.List");
  DistanceConfig cfg{Norm::L1, false, true, 0.5};
  EXPECT_DOUBLE_EQ(split_dist(a, b, cfg), 0.0);  // {0, 1} -> mean of {0}
  EXPECT_DOUBLE_EQ(split_dist(a, a, cfg), 0.0);
}

TEST(Distance, ContractOnRandomPairs) {
  oracle::Rng rng(32);
  const auto cfgs = all_distance_configs();
  for (int i = 0; i < 200; ++i) {
    auto a = oracle::random_graph(rng), b = oracle::random_graph(rng);
    GraphProfile pa(a), pb(b);
    for (const auto& cfg : cfgs) {
      const double d = distance(pa, pb, cfg);
      EXPECT_GE(d, 0.0);
      EXPECT_LE(d, 1.0);
      EXPECT_NEAR(d, distance(pb, pa, cfg), 1e-12) << cfg.name();
      EXPECT_EQ(distance(pa, pa, cfg), 0.0) << cfg.name();
    }
  }
}

TEST(Distance, SensitiveToOneExtraEdge) {
  // unique API-typed labels so that every edge changes some feature
  UsageGraph g;
  g.add_node(NodeKind::Data, "A", "x.y.A");
  g.add_node(NodeKind::Action, "A.f()", "x.y.A");
  g.add_node(NodeKind::Action, "B.g()", "x.y.B");
  g.add_edge(0, 1, EdgeLabel::Recv);
  UsageGraph h = g;
  h.add_edge(1, 2, EdgeLabel::Order);
  for (const auto& cfg : all_distance_configs()) EXPECT_GT(distance(g, h, cfg), 0.0) << cfg.name();
}
