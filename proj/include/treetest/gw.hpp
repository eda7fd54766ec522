#pragma once

// Random binary trees from the binomial Galton-Watson process: every present
// node below the depth cap has each of its two children independently with
// probability p, i.e. 0, 1 or 2 offspring with probabilities (1-p)^2,
// 2p(1-p), p^2. By default the root is always present; RootRule::bernoulli
// instead treats the root as an offspring too, present with probability p, so
// a node of generation g is present with probability p^g. Under that rule the
// expected mean tree is exactly gw_theoretical_mean(p).

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "treetest/mean.hpp"
#include "treetest/random.hpp"
#include "treetest/tree.hpp"

namespace treetest {

enum class RootRule { always, bernoulli };

inline std::string to_string(RootRule r) { return r == RootRule::always ? "always" : "bernoulli"; }

inline RootRule parse_root_rule(const std::string& s) {
  if (s == "always") return RootRule::always;
  if (s == "bernoulli") return RootRule::bernoulli;
  throw InvalidArgument("root rule must be 'always' or 'bernoulli', got '" + s + "'");
}

struct GWParams {
  double p = 0.5;
  std::size_t max_depth = 12;
  std::uint64_t seed = kDefaultSeed;
  RootRule root = RootRule::always;

  void validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in [0, 1]");
    if (max_depth < 1) throw InvalidArgument("max depth must be at least 1");
  }
};

namespace detail {
inline constexpr std::uint64_t kGwTreeDomain = 0x6777'7472'6565ULL;
}

/// One tree, drawn generation by generation; within a generation nodes are
/// visited in canonical order and child 1 is drawn before child 2.
inline Tree sample_gw_tree(double p, std::size_t max_depth, RandomStream& rng, RootRule root = RootRule::always) {
  GWParams{p, max_depth, 0, root}.validate();
  std::vector<NodeAddress> nodes;
  std::vector<NodeAddress> level;
  if (root == RootRule::always || rng.bernoulli(p)) level.push_back(NodeAddress::root());
  for (std::size_t g = 1; !level.empty(); ++g) {
    nodes.insert(nodes.end(), level.begin(), level.end());
    if (g == max_depth) break;
    std::vector<NodeAddress> next;
    for (const auto& v : level) {
      for (Symbol a = 1; a <= 2; ++a) {
        if (rng.bernoulli(p)) next.push_back(v.child(a));
      }
    }
    std::sort(next.begin(), next.end());
    level = std::move(next);
  }
  return make_tree_unchecked(std::move(nodes), 2);
}

inline Tree sample_gw_tree(const GWParams& params, RandomStream& rng) {
  return sample_gw_tree(params.p, params.max_depth, rng, params.root);
}

/// Tree i of the sample is drawn from the stream (seed, i), so any prefix of
/// a larger sample with the same seed is identical.
inline TreeSample sample_gw_sample(const GWParams& params, std::size_t n, double z = kDefaultZ) {
  params.validate();
  if (n == 0) throw InvalidArgument("sample size must be positive");
  std::vector<Tree> trees;
  trees.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rng(params.seed, {detail::kGwTreeDomain, i});
    trees.push_back(sample_gw_tree(params, rng));
  }
  return TreeSample(std::move(trees), WeightConfig(2, z, params.max_depth));
}

}  // namespace treetest
