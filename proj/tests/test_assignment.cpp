#include <gtest/gtest.h>

#include "changerule/assignment.hpp"
#include "oracles.hpp"

using namespace changerule;

namespace {

std::vector<std::vector<std::int64_t>> random_matrix(oracle::Rng& rng, std::size_t n, int max_cost) {
  std::vector<std::vector<std::int64_t>> m(n, std::vector<std::int64_t>(n));
  for (auto& row : m)
    for (auto& c : row) c = oracle::uniform(rng, 0, max_cost);
  return m;
}

CostMatrix to_cost(const std::vector<std::vector<std::int64_t>>& m) {
  CostMatrix c(m.size());
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t k = 0; k < m.size(); ++k) c(r, k) = m[r][k];
  return c;
}

}  // namespace

TEST(KuhnMunkres, EmptyMatrix) {
  auto a = kuhn_munkres(CostMatrix(0));
  EXPECT_TRUE(a.column_of_row.empty());
  EXPECT_EQ(a.total, 0);
}

TEST(KuhnMunkres, KnownOptimum) {
  CostMatrix c{{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  auto a = kuhn_munkres(c);
  EXPECT_EQ(a.total, 5);
  EXPECT_EQ(a.column_of_row, (std::vector<std::size_t>{1, 0, 2}));
}

TEST(KuhnMunkres, RejectsNegativeAndNonSquare) {
  EXPECT_THROW(kuhn_munkres(CostMatrix{{-1}}), std::invalid_argument);
  EXPECT_THROW((CostMatrix{{1, 2}, {3}}), std::invalid_argument);
}

TEST(KuhnMunkres, MatchesBruteForceTotal) {
  oracle::Rng rng(1);
  for (int i = 0; i < 300; ++i) {
    const auto n = static_cast<std::size_t>(oracle::uniform(rng, 1, 7));
    auto m = random_matrix(rng, n, 20);
    EXPECT_EQ(kuhn_munkres(to_cost(m)).total, oracle::brute_min_assignment(m));
  }
}

TEST(KuhnMunkres, TieBreakIsLexicographicallySmallest) {
  oracle::Rng rng(2);
  for (int i = 0; i < 300; ++i) {
    const auto n = static_cast<std::size_t>(oracle::uniform(rng, 1, 6));
    auto m = random_matrix(rng, n, 2);  // many ties
    EXPECT_EQ(kuhn_munkres(to_cost(m)).column_of_row, oracle::brute_lex_optimal(m));
  }
}

TEST(KuhnMunkres, AllEqualCostsGiveIdentity) {
  auto a = kuhn_munkres(CostMatrix(5, 7));
  EXPECT_EQ(a.column_of_row, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(a.total, 35);
}
