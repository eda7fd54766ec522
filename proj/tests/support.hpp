#pragma once

// Shared helpers for the test programs: independent oracles and a synthetic
// protein-family generator.

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "treetest/treetest.hpp"

namespace support {

using namespace treetest;

inline NodeAddress node(const std::string& s) { return NodeAddress::parse(s, kDefaultGlyphs); }

inline Tree tree(unsigned m, const std::vector<std::string>& tokens) {
  std::vector<NodeAddress> nodes;
  for (const auto& t : tokens) nodes.push_back(node(t));
  return validate_tree(std::move(nodes), m);
}

inline std::set<std::string> node_set(const Tree& t) {
  std::set<std::string> out;
  for (const auto& v : t.nodes()) out.insert(v.to_string(kDefaultGlyphs, kRootToken));
  return out;
}

// Distance straight from the definition: sum of z^gen over the symmetric
// difference, with nodes compared as strings.
inline double oracle_distance(const Tree& a, const Tree& b, double z) {
  const auto sa = node_set(a), sb = node_set(b);
  double d = 0.0;
  auto gen = [](const std::string& s) { return s == "@" ? 1.0 : static_cast<double>(s.size() + 1); };
  for (const auto& s : sa)
    if (!sb.count(s)) d += std::pow(z, gen(s));
  for (const auto& s : sb)
    if (!sa.count(s)) d += std::pow(z, gen(s));
  return d;
}

// Every father-closed subset of the full binary tree of the given depth.
inline std::vector<Tree> all_binary_trees(std::size_t depth) {
  const auto universe = full_tree(2, depth).nodes();
  std::vector<Tree> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe.size()); ++mask) {
    std::vector<NodeAddress> nodes;
    for (std::size_t i = 0; i < universe.size(); ++i)
      if (mask >> i & 1U) nodes.push_back(universe[i]);
    try {
      out.push_back(validate_tree(std::move(nodes), 2));
    } catch (const FatherMissing&) {
    }
  }
  return out;
}

// A random complete context model over 20 symbols: every single-symbol
// context, `refined` of which are split into their 20 length-2 extensions.
// Transition rows are skewed so that contexts are distinguishable.
inline ContextModel synthetic_protein_model(std::uint64_t seed, std::size_t refined = 3) {
  constexpr unsigned m = 20;
  RandomStream rng(seed, {0x73796e74});
  auto row = [&] {
    std::vector<double> w(m);
    double sum = 0.0;
    for (auto& x : w) {
      x = -std::log(1.0 - rng.uniform());
      x = x * x;
      sum += x;
    }
    for (auto& x : w) x /= sum;
    return w;
  };
  std::vector<Symbol> order(m);
  for (unsigned a = 0; a < m; ++a) order[a] = static_cast<Symbol>(a + 1);
  rng.shuffle(order);
  std::vector<std::pair<NodeAddress, std::vector<double>>> rules;
  for (unsigned k = 0; k < m; ++k) {
    const NodeAddress a = NodeAddress::root().child(order[k]);
    if (k < refined) {
      for (unsigned b = 1; b <= m; ++b) rules.emplace_back(a.child(static_cast<Symbol>(b)), row());
    } else {
      rules.emplace_back(a, row());
    }
  }
  return ContextModel(m, std::move(rules));
}

// `count` protein-like records drawn from one model, as FASTA records.
inline std::vector<FastaRecord> synthetic_family(const ContextModel& model, std::size_t count, std::size_t length,
                                                 std::uint64_t seed, const std::string& prefix = "seq") {
  std::vector<FastaRecord> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto seq = sample_vlmc(model, length, RandomStream(seed, {i})());
    FastaRecord r;
    r.id = prefix + std::to_string(i);
    for (auto s : seq.symbols) r.residues.push_back(kAminoAcids[s - 1]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace support
