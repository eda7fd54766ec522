#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treetest/error.hpp"
#include "treetest/tree.hpp"

namespace treetest {

/// An ordered collection of trees that all live in one WeightConfig.
class TreeSample {
 public:
  explicit TreeSample(WeightConfig config) : config_(config) {}
  TreeSample(std::vector<Tree> trees, WeightConfig config) : config_(config), trees_(std::move(trees)) {
    for (const auto& t : trees_) config_.check(t);
  }

  const WeightConfig& config() const { return config_; }
  const std::vector<Tree>& trees() const { return trees_; }
  std::size_t size() const { return trees_.size(); }
  bool empty() const { return trees_.empty(); }
  const Tree& operator[](std::size_t i) const { return trees_[i]; }

  void push_back(Tree t) {
    config_.check(t);
    trees_.push_back(std::move(t));
  }

 private:
  WeightConfig config_;
  std::vector<Tree> trees_;
};

/// Which element of a non-unique empirical mean enters downstream statistics.
enum class TieRule { maximal, minimal };

inline std::string to_string(TieRule r) { return r == TieRule::maximal ? "maximal" : "minimal"; }

inline TieRule parse_tie_rule(const std::string& s) {
  if (s == "maximal") return TieRule::maximal;
  if (s == "minimal") return TieRule::minimal;
  throw InvalidArgument("tie rule must be 'maximal' or 'minimal', got '" + s + "'");
}

// Whether a node seen in `count` of `n` trees enters the majority-vote mean.
constexpr bool in_mean(std::size_t count, std::size_t n, TieRule rule) {
  return rule == TieRule::maximal ? 2 * count >= n : 2 * count > n;
}

/// The two extreme empirical mean trees. For odd n they coincide; for even n
/// every father-closed tree between them is also a mean.
struct MeanTreePair {
  Tree minimal;   // nodes present in more than half of the sample
  Tree maximal;   // nodes present in at least half of the sample

  const Tree& select(TieRule rule) const { return rule == TieRule::maximal ? maximal : minimal; }
};

/// Per-node majority vote. Father-closure of the result follows from the
/// inputs being father-closed: a father is counted at least as often as its son.
inline MeanTreePair empirical_mean(const TreeSample& sample) {
  if (sample.empty()) throw EmptySample("cannot take the mean of an empty sample");
  std::unordered_map<NodeAddress, std::size_t, NodeAddressHash> counts;
  for (const auto& t : sample.trees())
    for (const auto& v : t.nodes()) ++counts[v];

  const std::size_t n = sample.size();
  std::vector<NodeAddress> minimal, maximal;
  for (const auto& [v, c] : counts) {
    if (in_mean(c, n, TieRule::maximal)) maximal.push_back(v);
    if (in_mean(c, n, TieRule::minimal)) minimal.push_back(v);
  }
  std::sort(minimal.begin(), minimal.end());
  std::sort(maximal.begin(), maximal.end());
  const unsigned m = sample.config().alphabet_size();
  return {make_tree_unchecked(std::move(minimal), m), make_tree_unchecked(std::move(maximal), m)};
}

/// (1/n) sum_i d(T_i, t), the objective the empirical mean minimizes.
inline double mean_distance_to(const TreeSample& sample, const Tree& t) {
  if (sample.empty()) throw EmptySample("cannot average over an empty sample");
  sample.config().check(t);
  double total = 0.0;
  for (const auto& ti : sample.trees()) total += distance(ti, t, sample.config());
  return total / static_cast<double>(sample.size());
}

/// k0 = max{k >= 0 : p^k >= 1/2}, capped at `cap`. Compared in log space with
/// a 1e-12 guard band so that p^k == 1/2 exactly counts as >=.
inline std::size_t gw_mean_depth(double p, std::size_t cap) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in [0, 1]");
  if (p == 0.0) return 0;
  const double log_p = std::log(p);
  const double log_half = std::log(0.5) - 1e-12;
  std::size_t k = 0;
  while (k < cap && static_cast<double>(k + 1) * log_p >= log_half) ++k;
  return k;
}

/// Expected mean tree of the binary binomial Galton-Watson law with
/// parameter p: the full binary tree keeping every node with gen(v) <= k0.
/// Empty when p < 1/2. Truncated at the configuration's max depth.
inline Tree gw_theoretical_mean(double p, const WeightConfig& w) {
  if (w.alphabet_size() != 2) throw InvalidArgument("the Galton-Watson mean is defined for binary trees");
  const std::size_t cap = w.max_depth().value_or(std::numeric_limits<std::size_t>::max());
  if (p == 1.0 && !w.max_depth()) throw InvalidArgument("p = 1 has an infinite mean tree; set a max depth");
  return full_tree(2, gw_mean_depth(p, cap));
}

}  // namespace treetest
