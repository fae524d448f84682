#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "wavekin/combinatorics.hpp"

using namespace wavekin;

namespace {

TorusSpec torus(double L, double zeta2 = 1.0) {
  TorusSpec s;
  s.dim = 2;
  s.L = L;
  s.zeta = {1.0, zeta2, 1.0};
  return s;
}

Wavevector w2(int a, int b) { return Wavevector(2, {a, b, 0}); }

CountingProblem order1_problem(const Wavevector& k, const TorusSpec& spec, double T, double theta, double sigma) {
  CountingProblem p;
  p.copies = enumerate_trees(1);
  p.red = {{LeafRef{0, 0}, k}};
  p.sigma = {std::vector<double>(p.copies[0].nodes.size(), 0.0)};
  p.sigma[0][0] = sigma;
  p.spec = spec;
  p.T = T;
  p.theta = theta;
  return p;
}

}  // namespace

TEST(Trees, CensusMatchesRecursion) {
  const std::uint64_t expect[] = {1, 1, 3, 12, 55};
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(tree_count(n), expect[n]);
  EXPECT_EQ(tree_count(6), 1428u);
  for (int n = 0; n <= 4; ++n) {
    const auto trees = enumerate_trees(n);
    EXPECT_EQ(trees.size(), tree_count(n));
    std::set<std::string> shapes;
    for (const auto& t : trees) {
      t.validate();
      EXPECT_EQ(t.order(), n);
      EXPECT_EQ(t.leaves().size(), static_cast<std::size_t>(2 * n + 1));
      EXPECT_EQ(t.branching().size(), static_cast<std::size_t>(n));
      shapes.insert(t.shape());
    }
    EXPECT_EQ(shapes.size(), trees.size());
  }
}

TEST(Trees, LeafSignsAlternateUnderMiddleChild) {
  const auto t = enumerate_trees(1).at(0);
  const auto lv = t.leaves();
  ASSERT_EQ(lv.size(), 3u);
  EXPECT_EQ(t.sign(0), 1);
  EXPECT_EQ(t.sign(lv[0]), 1);
  EXPECT_EQ(t.sign(lv[1]), -1);
  EXPECT_EQ(t.sign(lv[2]), 1);
  // a leaf count with one more + than - in every tree
  for (int n = 0; n <= 3; ++n)
    for (const auto& tr : enumerate_trees(n)) {
      int s = 0;
      for (int l : tr.leaves()) s += tr.sign(l);
      EXPECT_EQ(s, 1);
    }
}

TEST(Trees, ValidateRejectsMalformedArena) {
  TernaryTree t = enumerate_trees(1).at(0);
  t.nodes[1].parent = 2;
  EXPECT_THROW(t.validate(), std::logic_error);
  TernaryTree u;
  u.nodes.resize(2);
  u.nodes[0].child[0] = 1;
  EXPECT_THROW(u.validate(), std::logic_error);
}

TEST(Pairings, IsserlisCounts) {
  EXPECT_EQ(isserlis_pairings(2), 1u);
  EXPECT_EQ(isserlis_pairings(4), 3u);
  EXPECT_EQ(isserlis_pairings(6), 15u);
  EXPECT_EQ(isserlis_pairings(10), 945u);
  for (int m : {2, 4, 6, 8}) {
    std::uint64_t n = 0;
    std::set<std::vector<std::pair<int, int>>> seen;
    for_each_pairing(m, [&](const std::vector<std::pair<int, int>>& p) {
      ++n;
      EXPECT_EQ(p.size(), static_cast<std::size_t>(m / 2));
      std::set<int> used;
      for (auto [a, b] : p) used.insert({a, b});
      EXPECT_EQ(used.size(), static_cast<std::size_t>(m));
      seen.insert(p);
    });
    EXPECT_EQ(n, isserlis_pairings(m));
    EXPECT_EQ(seen.size(), n);
  }
}

TEST(Pairings, TwoFirstOrderCopies) {
  // leaves (+,-,+) per copy: the middle leaf pairs within its copy (2 x 2 ways) or across (2 ways)
  const auto t = enumerate_trees(1).at(0);
  const std::vector<TernaryTree> copies{t, t};
  const auto all = sign_pairings(copies);
  EXPECT_EQ(all.size(), 6u);
  for (const auto& p : all) EXPECT_TRUE(pairing_respects_signs(copies, p));
  const auto lv = t.leaves();
  Pairing bad;
  bad.pairs = {{{0, lv[0]}, {0, lv[2]}}, {{0, lv[1]}, {1, lv[1]}}, {{1, lv[0]}, {1, lv[2]}}};
  EXPECT_FALSE(pairing_respects_signs(copies, bad));
  // a single copy has an odd number of leaves
  EXPECT_TRUE(sign_pairings({t}).empty());
}

TEST(Counting, OrderZeroRootPinned) {
  CountingProblem p;
  p.copies = enumerate_trees(0);
  p.spec = torus(4.0);
  p.red = {{LeafRef{0, 0}, w2(1, 2)}};
  EXPECT_EQ(count_admissible(p), 1u);
  p.red = {{LeafRef{0, 0}, w2(9, 0)}};
  EXPECT_EQ(count_admissible(p), 0u);
}

TEST(Counting, OrderOneMatchesTripleLoop) {
  for (double z : {1.0, 1.3})
    for (double sigma : {0.0, 0.618034})
      for (auto k : {w2(0, 0), w2(2, -1)}) {
        const auto spec = torus(5.0, z);
        const auto expect = oracle::count_order1(k, spec, 2.0, 0.1, sigma, false);
        EXPECT_EQ(count_admissible(order1_problem(k, spec, 2.0, 0.1, sigma)), expect) << z << " " << sigma;
        EXPECT_GT(expect, 0u);
      }
}

TEST(Counting, DiagonalPairingOfTwoCopiesReproducesSingleCopy) {
  const auto t = enumerate_trees(1).at(0);
  const auto lv = t.leaves();
  const auto spec = torus(4.0, 1.2);
  const auto k = w2(1, 0);
  CountingProblem p;
  p.copies = {t, t};
  for (int l : lv) p.pairing.pairs.push_back({{0, l}, {1, l}});
  p.red = {{LeafRef{0, 0}, k}};
  p.spec = spec;
  p.T = 3.0;
  p.theta = 0.2;
  EXPECT_EQ(count_admissible(p), oracle::count_order1(k, spec, 3.0, 0.2, 0.0, false));
}

TEST(Counting, BudgetAndSigmaShapeChecked) {
  auto p = order1_problem(w2(0, 0), torus(5.0), 2.0, 0.1, 0.0);
  p.budget = 10;
  EXPECT_THROW(count_admissible(p), std::runtime_error);
  p.budget = 100000000ULL;
  p.sigma = {{0.0}};
  EXPECT_THROW(count_admissible(p), std::invalid_argument);
}

TEST(Degenerate, MatchesTripleLoop) {
  for (double z : {1.0, 1.4})
    for (auto k : {w2(0, 0), w2(1, 1), w2(3, 0)})
      for (double alpha : {0.5, 2.0}) {
        const auto spec = torus(4.0, z);
        EXPECT_EQ(degenerate_set_count(k, spec, 3.0, alpha, 0.2), oracle::count_degenerate(k, spec, 3.0, alpha, 0.2));
      }
  EXPECT_THROW(degenerate_set_count(w2(0, 0), torus(2.0), 5.0, 1.0, 0.0), std::invalid_argument);
}

TEST(Degenerate, BoundFormula) {
  EXPECT_DOUBLE_EQ(degenerate_bound(2, 4.0, 2.0, 1.0, 0.0), 256.0 / 2.0 * std::sqrt(1.5));
  EXPECT_DOUBLE_EQ(degenerate_bound(2, 4.0, 2.0, 1.0, 0.5), 4.0 * 256.0 / 2.0 * std::sqrt(1.5));
}
