#include <gtest/gtest.h>

#include "support.hpp"

using namespace treetest;
using support::node;
using support::tree;

TEST(NodeAddress, FatherDropsOldestSymbol) {
  EXPECT_EQ(node("21").father(), node("1"));
  EXPECT_EQ(node("1").father(), NodeAddress::root());
  EXPECT_EQ(node("1").child(2), node("21"));
  EXPECT_THROW(NodeAddress::root().father(), InvalidArgument);
  EXPECT_EQ(NodeAddress::root().generation(), 1u);
  EXPECT_EQ(node("122").generation(), 4u);
}

TEST(NodeAddress, CanonicalOrderIsGenerationThenLexicographic) {
  std::vector<NodeAddress> v{node("21"), node("2"), node("@"), node("12"), node("1"), node("111")};
  std::sort(v.begin(), v.end());
  std::vector<std::string> s;
  for (const auto& x : v) s.push_back(x.to_string(kDefaultGlyphs, kRootToken));
  EXPECT_EQ(s, (std::vector<std::string>{"@", "1", "2", "12", "21", "111"}));
}

TEST(NodeAddress, ParseRoundTrip) {
  for (const std::string tok : {"@", "1", "2", "12", "9a", "ZZ1"}) EXPECT_EQ(node(tok).to_string(kDefaultGlyphs, kRootToken), tok);
  EXPECT_EQ(NodeAddress::root().to_string(), "λ");
  EXPECT_THROW(node("1#"), Error);
  EXPECT_THROW(node(""), Error);
}

TEST(Tree, RejectsMissingFather) {
  try {
    tree(2, {"@", "1", "21", "12"});
    FAIL() << "expected FatherMissing";
  } catch (const FatherMissing& e) {
    EXPECT_EQ(e.node(), "2");
  }
  EXPECT_THROW(tree(2, {"1"}), FatherMissing);
}

TEST(Tree, RejectsSymbolOutsideAlphabet) { EXPECT_THROW(tree(2, {"@", "3"}), SymbolOutOfRange); }

TEST(Tree, DeduplicatesAndSorts) {
  const Tree t = tree(2, {"2", "@", "1", "2", "21"});
  EXPECT_EQ(t.to_string(), "{λ,1,2,21}");
  EXPECT_EQ(t.depth(), 3u);
  EXPECT_TRUE(tree(2, {}).empty());
  EXPECT_TRUE(tree(2, {"@", "1"}).is_subtree_of(t));
  EXPECT_FALSE(t.is_subtree_of(tree(2, {"@", "1"})));
}

TEST(Tree, FullTreeSize) {
  EXPECT_EQ(full_tree(2, 0).size(), 0u);
  EXPECT_EQ(full_tree(2, 3).size(), 7u);
  EXPECT_EQ(full_tree(3, 3).size(), 13u);
  EXPECT_NO_THROW(validate_tree(full_tree(4, 4).nodes(), 4));
}

TEST(WeightConfig, Validation) {
  EXPECT_THROW(WeightConfig(1, 0.3, 3), InvalidArgument);
  EXPECT_THROW(WeightConfig(2, 0.0, 3), InvalidArgument);
  EXPECT_THROW(WeightConfig(2, 0.5, std::nullopt), InvalidArgument);
  EXPECT_NO_THROW(WeightConfig(2, 0.49, std::nullopt));
  EXPECT_NO_THROW(WeightConfig(2, 0.9, 5));
  EXPECT_THROW(WeightConfig(2, 0.36, 2).check(tree(2, {"@", "1", "11"})), ConfigMismatch);
  EXPECT_THROW(WeightConfig(3, 0.36, 4).check(tree(2, {"@"})), ConfigMismatch);
}

TEST(Distance, WorkedExample) {
  const WeightConfig w(2, 0.36, 3);
  const Tree t = tree(2, {"@", "1", "2", "11", "21"});
  const Tree y = tree(2, {"@", "1", "2", "12", "22"});
  EXPECT_NEAR(distance(t, y, w), 4 * 0.36 * 0.36 * 0.36, 1e-15);
}

TEST(Distance, MetricAxiomsAgainstOracle) {
  const auto trees = support::all_binary_trees(3);
  ASSERT_EQ(trees.size(), 26u);
  const WeightConfig w(2, 0.36, 3);
  for (const auto& a : trees) {
    EXPECT_EQ(distance(a, a, w), 0.0);
    for (const auto& b : trees) {
      const double d = distance(a, b, w);
      EXPECT_NEAR(d, support::oracle_distance(a, b, 0.36), 1e-14);
      EXPECT_EQ(d, distance(b, a, w));
      if (!(a == b)) {
        EXPECT_GT(d, 0.0);
      }
    }
  }
  for (std::size_t i = 0; i < trees.size(); i += 3)
    for (std::size_t j = 0; j < trees.size(); j += 2)
      for (std::size_t k = 0; k < trees.size(); k += 5)
        EXPECT_LE(distance(trees[i], trees[k], w), distance(trees[i], trees[j], w) + distance(trees[j], trees[k], w) + 1e-15);
}

TEST(Distance, EmptyTreeDistanceIsWeightedSize) {
  const WeightConfig w(3, 0.2, 3);
  const Tree full = full_tree(3, 3);
  EXPECT_NEAR(distance(full, tree(3, {}), w), 0.2 + 3 * 0.04 + 9 * 0.008, 1e-15);
}

TEST(Distance, RejectsMismatchedConfig) {
  const WeightConfig w(2, 0.36, 2);
  EXPECT_THROW(distance(tree(2, {"@", "1", "11"}), tree(2, {"@"}), w), ConfigMismatch);
}
