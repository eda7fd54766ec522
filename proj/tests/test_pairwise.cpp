#include <gtest/gtest.h>

#include "support.hpp"

using namespace treetest;

namespace {

TreeSample family(std::uint64_t model_seed, std::uint64_t seq_seed, std::size_t count) {
  const auto model = support::synthetic_protein_model(model_seed);
  return trees_from_records(support::synthetic_family(model, count, 400, seq_seed), PSTParams{3}).sample;
}

}  // namespace

TEST(SplitInHalf, SizesAndContent) {
  const auto s = sample_gw_sample(GWParams{0.6, 6, 1}, 11);
  RandomStream rng(4);
  const auto [a, b] = split_in_half(s, rng);
  EXPECT_EQ(a.size(), 5u);
  EXPECT_EQ(b.size(), 6u);
  std::vector<Tree> all = a.trees();
  all.insert(all.end(), b.trees().begin(), b.trees().end());
  auto expected = s.trees();
  auto key = [](const Tree& x, const Tree& y) { return x.nodes() < y.nodes(); };
  std::sort(all.begin(), all.end(), key);
  std::sort(expected.begin(), expected.end(), key);
  EXPECT_EQ(all, expected);
  RandomStream one(1);
  EXPECT_THROW(split_in_half(TreeSample(std::vector<Tree>{s[0]}, s.config()), one), EmptySample);
}

TEST(Pairwise, ThreeFamilies) {
  const std::vector<TreeSample> samples{family(1, 10, 40), family(1, 11, 40), family(2, 12, 40)};
  TestConfig cfg;
  cfg.num_permutations = 400;
  const auto r = pairwise_family_tests(samples, {"A", "A2", "B"}, cfg);
  EXPECT_EQ(r.num_comparisons, 3u);
  EXPECT_DOUBLE_EQ(r.corrected_alpha, 0.05 / 3);
  EXPECT_EQ(r.off_diagonal.size(), 3u);
  EXPECT_EQ(r.diagonal.size(), 3u);
  ASSERT_NE(r.find(2, 0), nullptr);
  EXPECT_EQ(r.find(2, 0)->i, 0u);
  EXPECT_TRUE(r.find(0, 2)->result.reject.at(r.corrected_alpha));
  EXPECT_TRUE(r.find(1, 2)->result.reject.at(r.corrected_alpha));
  EXPECT_FALSE(r.find(0, 1)->result.reject.at(r.corrected_alpha));

  cfg.threads = 3;
  const auto again = pairwise_family_tests(samples, {"A", "A2", "B"}, cfg);
  for (std::size_t k = 0; k < r.off_diagonal.size(); ++k) {
    EXPECT_EQ(again.off_diagonal[k].result.null_distances, r.off_diagonal[k].result.null_distances);
  }

  const auto table = render_pairwise_table(r);
  EXPECT_NE(table.find("A2"), std::string::npos);
  EXPECT_NE(table.find('['), std::string::npos);
  const auto j = to_json(r, false);
  EXPECT_EQ(j["matrix"].size(), 3u);
  EXPECT_TRUE(j["matrix"][1][0].is_null());
  EXPECT_FALSE(j["matrix"][0][1].is_null());
}

TEST(Pairwise, Errors) {
  const auto s = sample_gw_sample(GWParams{0.6, 6, 1}, 5);
  TestConfig cfg;
  cfg.num_permutations = 10;
  EXPECT_THROW(pairwise_family_tests({s}, {}, cfg), InvalidArgument);
  EXPECT_THROW(pairwise_family_tests({s, s}, {"a"}, cfg), InvalidArgument);
  EXPECT_THROW(pairwise_family_tests({s, sample_gw_sample(GWParams{0.6, 7, 1}, 5)}, {}, cfg), ConfigMismatch);
  const auto r = pairwise_family_tests({s, s}, {}, cfg, 0.05, false);
  EXPECT_TRUE(r.diagonal.empty());
  EXPECT_EQ(r.names, (std::vector<std::string>{"family1", "family2"}));
}
