#pragma once

// Variable-length Markov chains over {1..m}: sampling from a context model and
// estimating the context tree of a sequence with a probabilistic suffix tree
// (PST) learner. Only the estimated tree structure is returned; transition
// probabilities are used during growth and then dropped.
//
// Contexts follow the node convention of tree.hpp: a context is written
// oldest symbol first, so "21" means x[n-2] = 2, x[n-1] = 1, and its father
// "1" is the shorter context x[n-1] = 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treetest/error.hpp"
#include "treetest/random.hpp"
#include "treetest/tree.hpp"

namespace treetest {

struct Sequence {
  std::vector<Symbol> symbols;
  std::string id;
};

/// A probabilistic context tree: a set of contexts with one next-symbol
/// distribution each.
class ContextModel {
 public:
  ContextModel(unsigned alphabet_size, std::vector<std::pair<NodeAddress, std::vector<double>>> rules)
      : alphabet_size_(alphabet_size) {
    if (alphabet_size < 2) throw InvalidArgument("alphabet size must be at least 2");
    std::sort(rules.begin(), rules.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const auto& [ctx, probs] = rules[i];
      if (i && rules[i - 1].first == ctx) throw InvalidArgument("duplicate context " + ctx.to_string());
      if (ctx.max_symbol() > alphabet_size) throw SymbolOutOfRange("context " + ctx.to_string() + " exceeds alphabet");
      if (probs.size() != alphabet_size) throw InvalidArgument("context " + ctx.to_string() + " needs m probabilities");
      double sum = 0.0;
      for (double q : probs) {
        if (!(q >= 0.0)) throw InvalidArgument("negative transition probability at " + ctx.to_string());
        sum += q;
      }
      if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("transition probabilities at " + ctx.to_string() + " do not sum to 1");
      contexts_.push_back(ctx);
      transitions_.push_back(probs);
    }
    if (contexts_.empty()) throw InvalidArgument("a context model needs at least one context");
    build_trie();
  }

  unsigned alphabet_size() const { return alphabet_size_; }
  const std::vector<NodeAddress>& contexts() const { return contexts_; }
  const std::vector<std::vector<double>>& transitions() const { return transitions_; }

  std::size_t max_context_length() const { return contexts_.back().length(); }

  /// All contexts, all their suffixes, and the root.
  Tree as_tree() const {
    std::vector<NodeAddress> nodes{NodeAddress::root()};
    for (auto v : contexts_) {
      while (!v.is_root()) {
        nodes.push_back(v);
        v = v.father();
      }
    }
    return validate_tree(std::move(nodes), alphabet_size_);
  }

  /// True when every sufficiently long past matches exactly one context:
  /// contexts are leaves of as_tree() and every inner node has all m sons.
  bool is_complete() const {
    const Tree t = as_tree();
    for (const auto& v : t.nodes()) {
      const bool is_context = std::binary_search(contexts_.begin(), contexts_.end(), v);
      std::size_t sons = 0;
      for (unsigned a = 1; a <= alphabet_size_; ++a) sons += t.contains(v.child(static_cast<Symbol>(a))) ? 1 : 0;
      if (is_context && sons != 0) return false;
      if (!is_context && sons != alphabet_size_) return false;
    }
    return true;
  }

  /// Index of the shortest context that is a suffix of `past`.
  std::size_t match(const std::vector<Symbol>& past) const {
    std::size_t node = 0;
    for (std::size_t k = 0;; ++k) {
      if (trie_[node].rule != kNone) return trie_[node].rule;
      if (k == past.size()) break;
      const Symbol s = past[past.size() - 1 - k];
      node = trie_[node].next[s - 1];
      if (node == kNone) break;
    }
    throw NoMatchingContext("no context matches the current past");
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  struct TrieNode {
    std::vector<std::size_t> next;
    std::size_t rule = kNone;
  };

  // Keyed most-recent-symbol first, so walking back through the past descends it.
  void build_trie() {
    trie_.assign(1, TrieNode{std::vector<std::size_t>(alphabet_size_, kNone), kNone});
    for (std::size_t i = 0; i < contexts_.size(); ++i) {
      const auto& s = contexts_[i].symbols();
      std::size_t node = 0;
      for (auto it = s.rbegin(); it != s.rend(); ++it) {
        auto& slot = trie_[node].next[*it - 1];
        if (slot == kNone) {
          slot = trie_.size();
          trie_.push_back(TrieNode{std::vector<std::size_t>(alphabet_size_, kNone), kNone});
        }
        node = trie_[node].next[*it - 1];
      }
      trie_[node].rule = i;
    }
  }

  unsigned alphabet_size_;
  std::vector<NodeAddress> contexts_;
  std::vector<std::vector<double>> transitions_;
  std::vector<TrieNode> trie_;
};

namespace detail {
inline constexpr std::uint64_t kVlmcDomain = 0x766c'6d63ULL;

inline Symbol draw_symbol(const std::vector<double>& probs, RandomStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    acc += probs[a];
    if (u < acc) return static_cast<Symbol>(a + 1);
  }
  // Rounding left u above the cumulative sum; take the last symbol with mass.
  for (std::size_t a = probs.size(); a-- > 0;)
    if (probs[a] > 0.0) return static_cast<Symbol>(a + 1);
  return static_cast<Symbol>(probs.size());
}
}  // namespace detail

/// Draws `length` symbols from the chain. The past is initialized with L
/// uniform symbols (L = longest context) and the first 10 L generated symbols
/// are discarded as burn-in.
inline Sequence sample_vlmc(const ContextModel& model, std::size_t length, std::uint64_t seed, std::string id = {}) {
  if (length == 0) throw InvalidArgument("sequence length must be positive");
  RandomStream rng(seed, {detail::kVlmcDomain});
  const std::size_t L = model.max_context_length();
  const std::size_t burn_in = 10 * L;
  std::vector<Symbol> x;
  x.reserve(L + burn_in + length);
  for (std::size_t i = 0; i < L; ++i) x.push_back(static_cast<Symbol>(1 + rng.below(model.alphabet_size())));
  while (x.size() < L + burn_in + length) {
    x.push_back(detail::draw_symbol(model.transitions()[model.match(x)], rng));
  }
  return {std::vector<Symbol>(x.end() - static_cast<std::ptrdiff_t>(length), x.end()), std::move(id)};
}

struct PSTParams {
  std::size_t max_context_length = 2;  // L
  double p_min = 0.001;
  double r = 1.1;
  double gamma_min = 0.001;
  double alpha_s = 0.0;

  void validate() const {
    if (max_context_length < 1) throw InvalidArgument("max context length must be positive");
    if (!(p_min > 0.0 && p_min < 1.0)) throw InvalidArgument("p_min must lie in (0, 1)");
    if (!(r > 1.0)) throw InvalidArgument("r must be greater than 1");
    if (!(gamma_min > 0.0 && gamma_min < 1.0)) throw InvalidArgument("gamma_min must lie in (0, 1)");
    if (!(alpha_s >= 0.0)) throw InvalidArgument("alpha_s must be non-negative");
  }
};

namespace detail {

// Substring counts up to a fixed length, keyed by the string read as a
// base-(m+1) number with digits 1..m, which is unique without a length tag.
class SubstringCounts {
 public:
  SubstringCounts(const std::vector<Symbol>& x, unsigned m, std::size_t max_len) : base_(m + 1) {
    if (static_cast<double>(max_len) * std::log2(static_cast<double>(base_)) >= 63.0) {
      throw InvalidArgument("context length too large for this alphabet");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::uint64_t code = 0;
      for (std::size_t k = 0; k < max_len && i + k < x.size(); ++k) {
        code = code * base_ + x[i + k];
        ++counts_[code];
      }
    }
  }

  std::uint64_t code(const NodeAddress& s) const {
    std::uint64_t c = 0;
    for (Symbol a : s.symbols()) c = c * base_ + a;
    return c;
  }

  std::size_t count(std::uint64_t code) const {
    auto it = counts_.find(code);
    return it == counts_.end() ? 0 : it->second;
  }

  std::uint64_t extend(std::uint64_t code, Symbol a) const { return code * base_ + a; }

 private:
  std::uint64_t base_;
  std::unordered_map<std::uint64_t, std::size_t> counts_;
};

}  // namespace detail

/// Grows a context tree from one sequence.
///
/// Candidates s (|s| <= L) with empirical frequency P(s) >= p_min are
/// examined breadth first, starting from the single symbols. A candidate is
/// kept, together with all its suffixes, when some symbol a has
/// P(a|s) >= (1 + alpha_s) gamma_min and P(a|s) / P(a|suffix(s)) >= r or
/// <= 1/r. Sons b s of any examined candidate with P(b s) >= p_min are
/// examined too, whether or not s was kept. Conditionals are smoothed as
/// (N(s a) + alpha_s) / (N(s .) + m alpha_s).
inline Tree pst_estimate(const Sequence& seq, unsigned alphabet_size, const PSTParams& params) {
  params.validate();
  if (alphabet_size < 2) throw InvalidArgument("alphabet size must be at least 2");
  const std::size_t L = params.max_context_length;
  const auto& x = seq.symbols;
  if (x.size() <= L) {
    throw SequenceTooShort("sequence '" + seq.id + "' has " + std::to_string(x.size()) +
                           " symbols; more than " + std::to_string(L) + " are required");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 1 || x[i] > alphabet_size) throw SymbolOutOfRange("symbol out of range at position " + std::to_string(i));
  }
  const detail::SubstringCounts counts(x, alphabet_size, L + 1);
  const double m = alphabet_size;
  const double n = static_cast<double>(x.size());

  auto frequency = [&](const NodeAddress& s) {
    return static_cast<double>(counts.count(counts.code(s))) / (n - static_cast<double>(s.length()) + 1.0);
  };
  // Next-symbol distribution after s; empty when s is never followed.
  auto conditional = [&](const NodeAddress& s) {
    std::vector<double> next(alphabet_size);
    const std::uint64_t c = counts.code(s);
    double total = 0.0;
    for (unsigned a = 1; a <= alphabet_size; ++a) {
      next[a - 1] = static_cast<double>(s.is_root() ? counts.count(a) : counts.count(counts.extend(c, static_cast<Symbol>(a))));
      total += next[a - 1];
    }
    if (total == 0.0) return std::vector<double>{};
    for (auto& q : next) q = (q + params.alpha_s) / (total + m * params.alpha_s);
    return next;
  };

  std::set<NodeAddress> kept{NodeAddress::root()};
  std::deque<NodeAddress> queue;
  for (unsigned a = 1; a <= alphabet_size; ++a) {
    NodeAddress s{static_cast<Symbol>(a)};
    if (frequency(s) >= params.p_min) queue.push_back(s);
  }
  const double floor = (1.0 + params.alpha_s) * params.gamma_min;
  while (!queue.empty()) {
    NodeAddress s = std::move(queue.front());
    queue.pop_front();
    const auto here = conditional(s);
    const auto parent = conditional(s.father());
    bool keep = false;
    for (std::size_t a = 0; a < here.size() && !keep; ++a) {
      if (here[a] < floor) continue;
      if (parent[a] == 0.0) {
        keep = true;
        continue;
      }
      const double ratio = here[a] / parent[a];
      keep = ratio >= params.r || ratio <= 1.0 / params.r;
    }
    if (keep) {
      for (NodeAddress v = s; !v.is_root(); v = v.father()) kept.insert(v);
    }
    if (s.length() < L) {
      for (unsigned b = 1; b <= alphabet_size; ++b) {
        NodeAddress son = s.child(static_cast<Symbol>(b));
        if (frequency(son) >= params.p_min) queue.push_back(std::move(son));
      }
    }
  }
  return make_tree_unchecked(std::vector<NodeAddress>(kept.begin(), kept.end()), alphabet_size);
}

/// The two binary example chains: contexts {11, 21, 2} and {1, 12, 22}.
inline ContextModel example_chain_a() {
  return ContextModel(2, {{NodeAddress{1, 1}, {0.7, 0.3}}, {NodeAddress{2, 1}, {0.4, 0.6}}, {NodeAddress{2}, {0.2, 0.8}}});
}

inline ContextModel example_chain_b() {
  return ContextModel(2, {{NodeAddress{1}, {0.6, 0.4}}, {NodeAddress{2, 2}, {0.4, 0.6}}, {NodeAddress{1, 2}, {0.2, 0.8}}});
}

}  // namespace treetest
