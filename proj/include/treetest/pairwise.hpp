#pragma once

// Simultaneous comparison of K families: all C(K,2) pairwise tests at the
// Bonferroni level overall_alpha / C(K,2), plus an optional null check per
// family obtained by testing two random halves of it against each other.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "treetest/error.hpp"
#include "treetest/mean.hpp"
#include "treetest/permutation_test.hpp"
#include "treetest/random.hpp"

namespace treetest {

/// Random split into floor(n/2) and ceil(n/2) trees; input order is kept
/// within each half.
inline std::pair<TreeSample, TreeSample> split_in_half(const TreeSample& sample, RandomStream& rng) {
  if (sample.size() < 2) throw EmptySample("a sample needs at least two trees to be split");
  std::vector<std::size_t> order(sample.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  const std::size_t half = sample.size() / 2;
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half));
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(half), order.end());
  TreeSample a(sample.config()), b(sample.config());
  for (std::size_t k = 0; k < order.size(); ++k) (k < half ? a : b).push_back(sample[order[k]]);
  return {std::move(a), std::move(b)};
}

struct PairwiseCell {
  std::size_t i = 0;
  std::size_t j = 0;
  TestResult result;
};

struct PairwiseResult {
  std::vector<std::string> names;
  double overall_alpha = 0.05;
  double corrected_alpha = 0.05;
  std::size_t num_comparisons = 0;
  std::vector<PairwiseCell> off_diagonal;  // i < j, row-major
  std::vector<PairwiseCell> diagonal;      // i == j, split-half null checks

  const PairwiseCell* find(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    const auto& cells = i == j ? diagonal : off_diagonal;
    for (const auto& c : cells)
      if (c.i == i && c.j == j) return &c;
    return nullptr;
  }
};

namespace detail {
inline constexpr std::uint64_t kPairwiseDomain = 0x7061'6972'73ULL;
}

/// Test (i, j) uses seeds derived from (cfg.seed, i, j) and runs at the
/// corrected level only; cfg.alphas is ignored.
inline PairwiseResult pairwise_family_tests(const std::vector<TreeSample>& samples, std::vector<std::string> names,
                                            const TestConfig& cfg, double overall_alpha = 0.05,
                                            bool with_diagonal = true) {
  const std::size_t k = samples.size();
  if (k < 2) throw InvalidArgument("pairwise testing needs at least two samples");
  if (!(overall_alpha > 0.0 && overall_alpha < 1.0)) throw InvalidArgument("overall alpha must lie in (0, 1)");
  if (names.empty()) {
    for (std::size_t i = 0; i < k; ++i) names.push_back("family" + std::to_string(i + 1));
  }
  if (names.size() != k) throw InvalidArgument("one name per sample is required");
  for (const auto& s : samples) {
    if (!(s.config() == samples.front().config())) throw ConfigMismatch("families use different weight configurations");
    if (s.empty()) throw EmptySample("family sample is empty");
  }

  PairwiseResult out;
  out.names = std::move(names);
  out.overall_alpha = overall_alpha;
  out.num_comparisons = k * (k - 1) / 2;
  out.corrected_alpha = overall_alpha / static_cast<double>(out.num_comparisons);

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < k; ++i) {
    if (with_diagonal) jobs.emplace_back(i, i);
    for (std::size_t j = i + 1; j < k; ++j) jobs.emplace_back(i, j);
  }
  std::vector<PairwiseCell> cells(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t n) {
    const auto [i, j] = jobs[n];
    TestConfig inner = cfg;
    inner.alphas = {out.corrected_alpha};
    inner.threads = 1;
    inner.seed = RandomStream(cfg.seed, {detail::kPairwiseDomain, i, j})();
    if (i == j) {
      RandomStream split_rng(cfg.seed, {detail::kPairwiseDomain, i, j, 1});
      const auto [a, b] = split_in_half(samples[i], split_rng);
      cells[n] = {i, j, run_test(a, b, inner)};
    } else {
      cells[n] = {i, j, run_test(samples[i], samples[j], inner)};
    }
  });
  for (auto& c : cells) (c.i == c.j ? out.diagonal : out.off_diagonal).push_back(std::move(c));
  return out;
}

/// Upper-triangular table: "(critical, observed)" off the diagonal and
/// "[observed, p-value]" on it.
inline std::string render_pairwise_table(const PairwiseResult& r) {
  std::ostringstream os;
  os << "level " << r.corrected_alpha << " per test (overall " << r.overall_alpha << ", " << r.num_comparisons
     << " comparisons)\n";
  os << "off-diagonal: (critical value, observed value); diagonal: [observed value, p-value] on split halves\n";
  std::size_t width = 16;
  for (const auto& n : r.names) width = std::max(width, n.size() + 2);
  auto cell = [](double a, double b, char open, char close) {
    std::ostringstream c;
    c << std::fixed << std::setprecision(2) << open << a << ", " << b << close;
    return c.str();
  };
  os << std::left << std::setw(static_cast<int>(width)) << "family";
  for (const auto& n : r.names) os << std::setw(static_cast<int>(width)) << n;
  os << '\n';
  for (std::size_t i = 0; i < r.names.size(); ++i) {
    os << std::setw(static_cast<int>(width)) << r.names[i];
    for (std::size_t j = 0; j < r.names.size(); ++j) {
      std::string text;
      if (j >= i) {
        if (const auto* c = r.find(i, j)) {
          text = i == j ? cell(c->result.observed_d, c->result.p_value, '[', ']')
                        : cell(c->result.q_alpha.begin()->second, c->result.observed_d, '(', ')');
        }
      }
      os << std::setw(static_cast<int>(width)) << text;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace treetest
