#pragma once

// Text formats.
//
// Sample files hold one tree per line after a header:
//
//   m=2 z=0.36 depth=12
//   # provenance: simulate-gw --p 0.5 --n 3
//   t0 @ 1 2 12
//   t1 @
//   t2
//
// Each record is an identifier followed by the tree's nodes in canonical
// order; "@" is the root and a record with no nodes is the empty tree. Nodes
// are spelled with one glyph per symbol, taken from the header's `alphabet`
// (default "123456789abc..."), e.g. alphabet=ACDEFGHIKLMNPQRSTVWY for proteins.
//
// Test results are JSON objects with the fields of TestResult; alpha levels
// are object keys rendered with at least two decimals ("0.10", "0.05").

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <locale>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "treetest/error.hpp"
#include "treetest/mean.hpp"
#include "treetest/pairwise.hpp"
#include "treetest/permutation_test.hpp"
#include "treetest/tree.hpp"

namespace treetest {

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, std::size_t line, std::string_view what) {
  double x = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError(line, "invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return x;
}

/// Alpha key: fixed notation with two decimals, more when needed to round-trip.
inline std::string format_alpha(double alpha) {
  for (int digits = 2; digits <= 20; ++digits) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << alpha;
    if (std::stod(os.str()) == alpha) return os.str();
  }
  return format_double(alpha);
}

inline std::string default_glyphs(unsigned m) {
  if (m > kDefaultGlyphs.size()) throw InvalidArgument("alphabet of size " + std::to_string(m) + " needs explicit glyphs");
  return std::string(kDefaultGlyphs.substr(0, m));
}

struct SampleFile {
  TreeSample sample;
  std::vector<std::string> ids;
  std::string alphabet;    // glyph per symbol; empty means the default glyphs
  std::string provenance;  // free text, single line

  std::string glyphs() const { return alphabet.empty() ? default_glyphs(sample.config().alphabet_size()) : alphabet; }
};

inline void write_sample(std::ostream& out, const SampleFile& file) {
  const auto& cfg = file.sample.config();
  if (!cfg.max_depth()) throw InvalidArgument("sample files require a bounded max depth");
  if (file.ids.size() != file.sample.size()) throw InvalidArgument("one identifier per tree is required");
  const std::string glyphs = file.glyphs();
  if (glyphs.size() != cfg.alphabet_size()) throw InvalidArgument("alphabet length does not match m");

  out << "m=" << cfg.alphabet_size() << " z=" << format_double(cfg.z()) << " depth=" << *cfg.max_depth();
  if (glyphs != default_glyphs(cfg.alphabet_size())) out << " alphabet=" << glyphs;
  out << '\n';
  if (!file.provenance.empty()) {
    if (file.provenance.find('\n') != std::string::npos) throw InvalidArgument("provenance must be a single line");
    out << "# provenance: " << file.provenance << '\n';
  }
  for (std::size_t i = 0; i < file.ids.size(); ++i) {
    const auto& id = file.ids[i];
    if (id.empty() || id[0] == '#' || id.find_first_of(" \t\r\n") != std::string::npos) {
      throw InvalidArgument("invalid record identifier '" + id + "'");
    }
    out << id;
    for (const auto& v : file.sample[i].nodes()) out << ' ' << v.to_string(glyphs, kRootToken);
    out << '\n';
  }
}

/// Identifiers t0, t1, ... for samples that carry none.
inline std::vector<std::string> default_ids(std::size_t n, std::string_view prefix = "t") {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::string(prefix) + std::to_string(i));
  return ids;
}

inline void write_sample_file(const std::string& path, const SampleFile& file) {
  std::ostringstream buf;
  write_sample(buf, file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << buf.str();
  if (!out.flush()) throw IoError("failed writing '" + path + "'");
}

namespace detail {
inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}
}  // namespace detail

inline SampleFile read_sample(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<WeightConfig> config;
  std::string alphabet, provenance;
  std::vector<std::string> ids;
  std::vector<Tree> trees;
  std::set<std::string, std::less<>> seen;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      constexpr std::string_view tag = "# provenance: ";
      if (std::string_view(line).substr(0, tag.size()) == tag) provenance = line.substr(tag.size());
      continue;
    }
    const auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    if (!config) {
      std::optional<unsigned> m;
      std::optional<double> z;
      std::optional<std::size_t> depth;
      for (auto tok : tokens) {
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value in header, got '" + std::string(tok) + "'");
        const auto key = tok.substr(0, eq);
        const auto value = tok.substr(eq + 1);
        if (key == "m") {
          m = static_cast<unsigned>(parse_double(value, line_no, "m"));
        } else if (key == "z") {
          z = parse_double(value, line_no, "z");
        } else if (key == "depth") {
          depth = static_cast<std::size_t>(parse_double(value, line_no, "depth"));
        } else if (key == "alphabet") {
          alphabet = std::string(value);
        } else {
          throw ParseError(line_no, "unknown header key '" + std::string(key) + "'");
        }
      }
      if (!m || !z || !depth) throw ParseError(line_no, "header must define m, z and depth");
      try {
        config.emplace(*m, *z, *depth);
      } catch (const InvalidArgument& e) {
        throw ParseError(line_no, e.what());
      }
      if (!alphabet.empty()) {
        if (alphabet.size() != *m) throw ParseError(line_no, "alphabet length does not match m");
        if (std::set<char>(alphabet.begin(), alphabet.end()).size() != alphabet.size()) {
          throw ParseError(line_no, "alphabet has repeated glyphs");
        }
        if (alphabet.find('@') != std::string::npos) throw ParseError(line_no, "'@' is reserved for the root");
      } else if (*m > kDefaultGlyphs.size()) {
        throw ParseError(line_no, "m > " + std::to_string(kDefaultGlyphs.size()) + " requires an alphabet");
      }
      continue;
    }

    const std::string id(tokens[0]);
    if (!seen.insert(id).second) throw ParseError(line_no, "duplicate record identifier '" + id + "'");
    const std::string glyphs = alphabet.empty() ? default_glyphs(config->alphabet_size()) : alphabet;
    std::vector<NodeAddress> nodes;
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      try {
        nodes.push_back(NodeAddress::parse(tokens[k], glyphs));
      } catch (const Error& e) {
        throw ParseError(line_no, "record '" + id + "': " + e.what());
      }
    }
    Tree t;
    try {
      t = validate_tree(std::move(nodes), config->alphabet_size());
    } catch (const FatherMissing& e) {
      throw FatherMissing(e.node(), "line " + std::to_string(line_no) + ", record '" + id + "'");
    }
    if (t.depth() > *config->max_depth()) {
      throw ParseError(line_no, "record '" + id + "' is deeper than the header's depth");
    }
    ids.push_back(id);
    trees.push_back(std::move(t));
  }
  if (!config) throw ParseError(line_no, "missing header line 'm=<int> z=<float> depth=<int>'");
  return SampleFile{TreeSample(std::move(trees), *config), std::move(ids), std::move(alphabet), std::move(provenance)};
}

inline SampleFile read_sample_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sample file '" + path + "'");
  return read_sample(in);
}

/// Throws ConfigMismatch when a file's header differs from what an operation needs.
inline void require_config(const SampleFile& file, const WeightConfig& expected) {
  if (!(file.sample.config() == expected)) throw ConfigMismatch("sample header does not match the requested m, z, depth");
}

using Json = nlohmann::ordered_json;

inline Json to_json(const TestResult& r, bool include_null) {
  Json j;
  j["observed_d"] = r.observed_d;
  j["p_value"] = r.p_value;
  Json q = Json::object(), rej = Json::object();
  for (const auto& [a, v] : r.q_alpha) q[format_alpha(a)] = v;
  for (const auto& [a, v] : r.reject) rej[format_alpha(a)] = v;
  j["q_alpha"] = q;
  j["reject"] = rej;
  if (include_null) j["null_distances"] = r.null_distances;
  return j;
}

inline TestResult test_result_from_json(const Json& j) {
  try {
    TestResult r;
    r.observed_d = j.at("observed_d").get<double>();
    r.p_value = j.at("p_value").get<double>();
    for (const auto& [k, v] : j.at("q_alpha").items()) r.q_alpha[std::stod(k)] = v.get<double>();
    for (const auto& [k, v] : j.at("reject").items()) r.reject[std::stod(k)] = v.get<bool>();
    if (j.contains("null_distances")) r.null_distances = j.at("null_distances").get<std::vector<double>>();
    return r;
  } catch (const std::exception& e) {
    throw ParseError(0, std::string("malformed test result: ") + e.what());
  }
}

inline void write_test_result(std::ostream& out, const TestResult& r, bool include_null) {
  out << to_json(r, include_null).dump(2) << '\n';
}

inline TestResult read_test_result(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const std::exception& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
  return test_result_from_json(j);
}

inline Json to_json(const PairwiseResult& r, bool include_null) {
  Json j;
  j["families"] = r.names;
  j["overall_alpha"] = r.overall_alpha;
  j["corrected_alpha"] = r.corrected_alpha;
  j["num_comparisons"] = r.num_comparisons;
  const std::size_t k = r.names.size();
  Json matrix = Json::array();
  for (std::size_t i = 0; i < k; ++i) {
    Json row = Json::array();
    for (std::size_t j2 = 0; j2 < k; ++j2) {
      const auto* c = j2 >= i ? r.find(i, j2) : nullptr;
      row.push_back(c ? to_json(c->result, include_null) : Json());
    }
    matrix.push_back(std::move(row));
  }
  j["matrix"] = std::move(matrix);
  return j;
}

}  // namespace treetest
