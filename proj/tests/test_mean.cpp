#include <gtest/gtest.h>

#include <limits>

#include "support.hpp"

using namespace treetest;
using support::tree;

namespace {

TreeSample random_sample(RandomStream& rng, const std::vector<Tree>& universe, const WeightConfig& w, std::size_t n) {
  TreeSample s(w);
  for (std::size_t i = 0; i < n; ++i) s.push_back(universe[rng.below(universe.size())]);
  return s;
}

}  // namespace

TEST(InMean, ThresholdsAndTies) {
  EXPECT_TRUE(in_mean(2, 4, TieRule::maximal));
  EXPECT_FALSE(in_mean(2, 4, TieRule::minimal));
  EXPECT_TRUE(in_mean(3, 5, TieRule::minimal));
  EXPECT_FALSE(in_mean(2, 5, TieRule::maximal));
  EXPECT_EQ(parse_tie_rule("minimal"), TieRule::minimal);
  EXPECT_THROW(parse_tie_rule("median"), InvalidArgument);
}

TEST(EmpiricalMean, SmallExample) {
  const WeightConfig w(2, 0.36, 3);
  TreeSample s({tree(2, {"@", "1"}), tree(2, {"@", "2"}), tree(2, {"@", "1", "11"}), tree(2, {})}, w);
  const auto pair = empirical_mean(s);
  EXPECT_EQ(pair.minimal, tree(2, {"@"}));
  EXPECT_EQ(pair.maximal, tree(2, {"@", "1"}));
  EXPECT_EQ(pair.select(TieRule::maximal), pair.maximal);
  EXPECT_THROW(empirical_mean(TreeSample(w)), EmptySample);
}

TEST(EmpiricalMean, OddSampleHasSingleMean) {
  const WeightConfig w(2, 0.36, 3);
  const auto universe = support::all_binary_trees(3);
  RandomStream rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const auto s = random_sample(rng, universe, w, 2 * (rep % 4) + 1);
    const auto pair = empirical_mean(s);
    EXPECT_EQ(pair.minimal, pair.maximal);
  }
}

// Exhaustive search over every tree of depth <= 3 for the minimal mean distance.
TEST(EmpiricalMean, MinimizesMeanDistanceOverAllTrees) {
  const WeightConfig w(2, 0.36, 3);
  const auto universe = support::all_binary_trees(3);
  RandomStream rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const auto s = random_sample(rng, universe, w, 1 + rng.below(5));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : universe) {
      double sum = 0.0;
      for (const auto& x : s.trees()) sum += support::oracle_distance(t, x, 0.36);
      best = std::min(best, sum / static_cast<double>(s.size()));
    }
    const auto pair = empirical_mean(s);
    EXPECT_NEAR(mean_distance_to(s, pair.minimal), best, 1e-12);
    EXPECT_NEAR(mean_distance_to(s, pair.maximal), best, 1e-12);
    EXPECT_TRUE(pair.minimal.is_subtree_of(pair.maximal));
  }
}

TEST(GWTheoreticalMean, KnownValues) {
  const WeightConfig w(2, 0.36, 12);
  EXPECT_EQ(gw_theoretical_mean(0.5, w), tree(2, {"@"}));
  EXPECT_EQ(gw_theoretical_mean(0.75, w), tree(2, {"@", "1", "2"}));
  EXPECT_EQ(gw_theoretical_mean(0.3, w), tree(2, {}));
  EXPECT_EQ(gw_theoretical_mean(1.0, w), full_tree(2, 12));
  EXPECT_EQ(gw_theoretical_mean(0.9, w), full_tree(2, 6));
  EXPECT_THROW(gw_theoretical_mean(1.0, WeightConfig(2, 0.3, std::nullopt)), InvalidArgument);
  EXPECT_THROW(gw_theoretical_mean(0.5, WeightConfig(3, 0.3, 4)), InvalidArgument);
}

TEST(GWTheoreticalMean, DepthMatchesBruteForce) {
  for (double p = 0.0; p <= 0.999; p += 0.013) {
    std::size_t k = 0;
    while (k < 40 && std::pow(p, static_cast<double>(k + 1)) >= 0.5) ++k;
    EXPECT_EQ(gw_mean_depth(p, 40), k) << "p=" << p;
  }
  EXPECT_EQ(gw_mean_depth(std::sqrt(0.5), 40), 2u);
}
