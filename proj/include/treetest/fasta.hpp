#pragma once

// FASTA ingestion for the protein pipeline: each record becomes one estimated
// context tree over the 20-letter amino-acid alphabet.

#include <cctype>
#include <cstddef>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "treetest/error.hpp"
#include "treetest/mean.hpp"
#include "treetest/vlmc.hpp"

namespace treetest {

// Residue i (1-based) of this string is symbol i.
inline constexpr std::string_view kAminoAcids = "ACDEFGHIKLMNPQRSTVWY";

struct FastaRecord {
  std::string id;
  std::string residues;
  std::size_t line = 0;  // line of the '>' header
};

/// Reads all records. Lowercase residues are upper-cased; whitespace inside
/// sequence lines is ignored. An input without any record is an error.
inline std::vector<FastaRecord> read_fasta(std::istream& in) {
  std::vector<FastaRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == ';') continue;
    if (line[0] == '>') {
      std::string header = line.substr(1);
      const auto end = header.find_first_of(" \t");
      FastaRecord r;
      r.id = header.substr(0, end);
      if (r.id.empty()) throw ParseError(line_no, "FASTA header without an identifier");
      r.line = line_no;
      records.push_back(std::move(r));
      continue;
    }
    if (records.empty()) throw ParseError(line_no, "sequence data before the first '>' header");
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      records.back().residues.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  if (records.empty()) throw ParseError(line_no, "no FASTA records found");
  return records;
}

inline std::vector<FastaRecord> read_fasta_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open FASTA file '" + path + "'");
  return read_fasta(in);
}

/// Maps residues to symbols 1..|alphabet|. Anything outside the alphabet
/// (B, Z, X, U, O, gaps, stop marks) raises UnknownResidue with a 1-based position.
inline Sequence encode_residues(const FastaRecord& record, std::string_view alphabet = kAminoAcids) {
  Sequence seq;
  seq.id = record.id;
  seq.symbols.reserve(record.residues.size());
  for (std::size_t i = 0; i < record.residues.size(); ++i) {
    const auto pos = alphabet.find(record.residues[i]);
    if (pos == std::string_view::npos) throw UnknownResidue(record.residues[i], i + 1, record.id);
    seq.symbols.push_back(static_cast<Symbol>(pos + 1));
  }
  return seq;
}

struct FastaTrees {
  TreeSample sample;
  std::vector<std::string> ids;
  std::vector<std::string> warnings;  // one per skipped record
};

/// One PST tree per record, in file order, in the space m = 20,
/// max depth L + 1. With skip_unknown, records containing non-standard
/// residues are dropped and reported in `warnings` instead of failing.
inline FastaTrees trees_from_records(const std::vector<FastaRecord>& records, const PSTParams& params,
                                     bool skip_unknown = false, double z = kDefaultZ) {
  params.validate();
  const auto m = static_cast<unsigned>(kAminoAcids.size());
  FastaTrees out{TreeSample(WeightConfig(m, z, params.max_context_length + 1)), {}, {}};
  for (const auto& rec : records) {
    Sequence seq;
    try {
      seq = encode_residues(rec);
    } catch (const UnknownResidue& e) {
      if (!skip_unknown) throw;
      out.warnings.push_back(std::string("skipped: ") + e.what());
      continue;
    }
    out.sample.push_back(pst_estimate(seq, m, params));
    out.ids.push_back(rec.id);
  }
  if (out.sample.empty()) throw EmptySample("no usable FASTA records");
  return out;
}

inline FastaTrees trees_from_fasta(const std::string& path, const PSTParams& params, bool skip_unknown = false,
                                   double z = kDefaultZ) {
  return trees_from_records(read_fasta_file(path), params, skip_unknown, z);
}

}  // namespace treetest
