#pragma once

// Node addressing, finite rooted trees as father-closed node sets, and the
// weighted node-difference metric d(t, y) = sum_v z^gen(v) |t(v) - y(v)|.
//
// A node is a finite string over the alphabet {1..m}. The root is the empty
// string. Strings are written oldest-symbol-first, so the father of a node is
// its suffix: father("112") == "12", father("1") == root. This is the same
// convention used for variable-length Markov chain contexts, where the last
// written symbol is the most recent one.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treetest/error.hpp"

namespace treetest {

using Symbol = std::uint8_t;

/// Symbol glyphs used when no explicit alphabet is given; symbol i is
/// kDefaultGlyphs[i - 1].
inline constexpr std::string_view kDefaultGlyphs =
    "123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

inline constexpr std::string_view kRootToken = "@";
inline constexpr double kDefaultZ = 0.36;
inline constexpr std::string_view kRootDisplay = "λ";

class NodeAddress {
 public:
  NodeAddress() = default;
  explicit NodeAddress(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}
  NodeAddress(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}

  static NodeAddress root() { return {}; }

  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::size_t length() const { return symbols_.size(); }
  bool is_root() const { return symbols_.empty(); }

  // The root is generation 1.
  std::size_t generation() const { return symbols_.size() + 1; }

  NodeAddress father() const {
    if (is_root()) throw InvalidArgument("the root has no father");
    return NodeAddress(std::vector<Symbol>(symbols_.begin() + 1, symbols_.end()));
  }

  // The child `a v` of `v`: prepends a (an older symbol, in context terms).
  NodeAddress child(Symbol a) const {
    std::vector<Symbol> s;
    s.reserve(symbols_.size() + 1);
    s.push_back(a);
    s.insert(s.end(), symbols_.begin(), symbols_.end());
    return NodeAddress(std::move(s));
  }

  Symbol max_symbol() const {
    return symbols_.empty() ? Symbol{0} : *std::max_element(symbols_.begin(), symbols_.end());
  }

  // Renders with the given glyphs; the root becomes `root_token`.
  std::string to_string(std::string_view glyphs = kDefaultGlyphs,
                        std::string_view root_token = kRootDisplay) const {
    if (is_root()) return std::string(root_token);
    std::string out;
    out.reserve(symbols_.size());
    for (Symbol s : symbols_) {
      if (s == 0 || s > glyphs.size()) throw SymbolOutOfRange("symbol " + std::to_string(s) + " has no glyph");
      out.push_back(glyphs[s - 1]);
    }
    return out;
  }

  // Inverse of to_string; accepts "@" and "λ" for the root.
  static NodeAddress parse(std::string_view token, std::string_view glyphs = kDefaultGlyphs) {
    if (token == kRootToken || token == kRootDisplay) return root();
    if (token.empty()) throw InvalidArgument("empty node token");
    std::vector<Symbol> s;
    s.reserve(token.size());
    for (char c : token) {
      auto pos = glyphs.find(c);
      if (pos == std::string_view::npos) {
        throw SymbolOutOfRange("node token '" + std::string(token) + "' contains unknown glyph '" +
                               std::string(1, c) + "'");
      }
      s.push_back(static_cast<Symbol>(pos + 1));
    }
    return NodeAddress(std::move(s));
  }

  // Canonical order: by generation, then lexicographic.
  friend std::strong_ordering operator<=>(const NodeAddress& a, const NodeAddress& b) {
    if (auto c = a.symbols_.size() <=> b.symbols_.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.symbols_.begin(), a.symbols_.end(),
                                                  b.symbols_.begin(), b.symbols_.end());
  }
  friend bool operator==(const NodeAddress&, const NodeAddress&) = default;

  friend std::ostream& operator<<(std::ostream& os, const NodeAddress& v) { return os << v.to_string(); }

 private:
  std::vector<Symbol> symbols_;
};

struct NodeAddressHash {
  std::size_t operator()(const NodeAddress& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ v.length();
    for (Symbol s : v.symbols()) {
      h ^= s;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// A finite, father-closed set of nodes of the full m-ary tree, kept in
/// canonical order. The empty tree is valid.
class Tree {
 public:
  explicit Tree(unsigned alphabet_size = 2) : alphabet_size_(alphabet_size) {}

  unsigned alphabet_size() const { return alphabet_size_; }
  const std::vector<NodeAddress>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  // Largest generation present; 0 for the empty tree.
  std::size_t depth() const { return nodes_.empty() ? 0 : nodes_.back().generation(); }

  bool contains(const NodeAddress& v) const { return std::binary_search(nodes_.begin(), nodes_.end(), v); }

  // Whether every node of this tree is also in `other`.
  bool is_subtree_of(const Tree& other) const {
    return std::includes(other.nodes_.begin(), other.nodes_.end(), nodes_.begin(), nodes_.end());
  }

  std::string to_string(std::string_view glyphs = kDefaultGlyphs) const {
    std::string out = "{";
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (i) out += ',';
      out += nodes_[i].to_string(glyphs);
    }
    return out + "}";
  }

  friend bool operator==(const Tree&, const Tree&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Tree& t) { return os << t.to_string(); }

 private:
  friend Tree validate_tree(std::vector<NodeAddress> nodes, unsigned alphabet_size);
  friend Tree make_tree_unchecked(std::vector<NodeAddress> sorted_nodes, unsigned alphabet_size);

  unsigned alphabet_size_;
  std::vector<NodeAddress> nodes_;
};

/// Builds a Tree from an arbitrary collection of nodes (duplicates allowed).
/// Throws SymbolOutOfRange for a symbol outside {1..m}, FatherMissing when the
/// set is not father-closed (the first offender in canonical order is reported).
inline Tree validate_tree(std::vector<NodeAddress> nodes, unsigned alphabet_size) {
  if (alphabet_size < 2) throw InvalidArgument("alphabet size must be at least 2");
  for (const auto& v : nodes) {
    for (Symbol s : v.symbols()) {
      if (s < 1 || s > alphabet_size) {
        throw SymbolOutOfRange("node " + v.to_string() + " has symbol " + std::to_string(s) +
                               " outside 1.." + std::to_string(alphabet_size));
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  for (const auto& v : nodes) {
    if (v.is_root()) continue;
    auto f = v.father();
    if (!std::binary_search(nodes.begin(), nodes.end(), f)) throw FatherMissing(f.to_string());
  }
  Tree t(alphabet_size);
  t.nodes_ = std::move(nodes);
  return t;
}

// For node lists that are already father-closed and canonically sorted.
// Debug builds still check.
inline Tree make_tree_unchecked(std::vector<NodeAddress> sorted_nodes, unsigned alphabet_size) {
#ifndef NDEBUG
  return validate_tree(std::move(sorted_nodes), alphabet_size);
#else
  Tree t(alphabet_size);
  t.nodes_ = std::move(sorted_nodes);
  return t;
#endif
}

/// Full m-ary tree containing every node of generation <= depth (empty for 0).
inline Tree full_tree(unsigned alphabet_size, std::size_t depth) {
  std::vector<NodeAddress> nodes;
  if (depth == 0) return make_tree_unchecked({}, alphabet_size);
  std::vector<NodeAddress> level{NodeAddress::root()};
  for (std::size_t g = 1; g <= depth; ++g) {
    nodes.insert(nodes.end(), level.begin(), level.end());
    if (g == depth) break;
    std::vector<NodeAddress> next;
    next.reserve(level.size() * alphabet_size);
    for (const auto& v : level)
      for (unsigned a = 1; a <= alphabet_size; ++a) next.push_back(v.child(static_cast<Symbol>(a)));
    std::sort(next.begin(), next.end());
    level = std::move(next);
  }
  return make_tree_unchecked(std::move(nodes), alphabet_size);
}

/// Parameters of the metric: alphabet size m, weight base z and the maximum
/// generation (root included). Node weights are phi(v) = z^gen(v).
class WeightConfig {
 public:
  WeightConfig(unsigned alphabet_size, double z, std::optional<std::size_t> max_depth)
      : alphabet_size_(alphabet_size), z_(z), max_depth_(max_depth) {
    if (alphabet_size < 2) throw InvalidArgument("alphabet size must be at least 2");
    if (!(z > 0.0) || !std::isfinite(z)) throw InvalidArgument("z must be a positive real");
    if (max_depth && *max_depth == 0) throw InvalidArgument("max depth must be positive");
    // With no depth cap the weights must be summable over the full tree.
    if (!max_depth && !(z * alphabet_size < 1.0)) {
      throw InvalidArgument("unbounded depth requires z < 1/m");
    }
  }

  unsigned alphabet_size() const { return alphabet_size_; }
  double z() const { return z_; }
  std::optional<std::size_t> max_depth() const { return max_depth_; }

  double weight(std::size_t generation) const { return std::pow(z_, static_cast<double>(generation)); }
  double weight(const NodeAddress& v) const { return weight(v.generation()); }

  // Throws ConfigMismatch unless `t` lives in this configuration's tree space.
  void check(const Tree& t) const {
    if (t.alphabet_size() != alphabet_size_) {
      throw ConfigMismatch("tree alphabet size " + std::to_string(t.alphabet_size()) + " != " +
                           std::to_string(alphabet_size_));
    }
    if (max_depth_ && t.depth() > *max_depth_) {
      throw ConfigMismatch("tree depth " + std::to_string(t.depth()) + " exceeds max depth " +
                           std::to_string(*max_depth_));
    }
  }

  // Sum of counts[g] * z^g over generations, accumulated from the root down.
  // Every distance in the library goes through here, so equal node-difference
  // profiles always give bit-identical values.
  double weighted_sum(const std::vector<std::size_t>& counts_by_generation) const {
    double total = 0.0;
    for (std::size_t g = 1; g < counts_by_generation.size(); ++g) {
      if (counts_by_generation[g]) total += static_cast<double>(counts_by_generation[g]) * weight(g);
    }
    return total;
  }

  friend bool operator==(const WeightConfig&, const WeightConfig&) = default;

 private:
  unsigned alphabet_size_;
  double z_;
  std::optional<std::size_t> max_depth_;
};

/// d(t, y): total weight of the nodes present in exactly one of the trees.
inline double distance(const Tree& t, const Tree& y, const WeightConfig& w) {
  w.check(t);
  w.check(y);
  std::vector<std::size_t> diff(std::max(t.depth(), y.depth()) + 1, 0);
  auto a = t.nodes().begin(), ae = t.nodes().end();
  auto b = y.nodes().begin(), be = y.nodes().end();
  while (a != ae || b != be) {
    if (b == be || (a != ae && *a < *b)) {
      ++diff[(a++)->generation()];
    } else if (a == ae || *b < *a) {
      ++diff[(b++)->generation()];
    } else {
      ++a;
      ++b;
    }
  }
  return w.weighted_sum(diff);
}

}  // namespace treetest
