#pragma once

#include <stdexcept>
#include <string>

namespace treetest {

// Base class for every domain error thrown by the library. The CLI maps these
// to exit code 2; anything else escaping a subcommand is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FatherMissing : public Error {
 public:
  explicit FatherMissing(const std::string& node)
      : Error("node '" + node + "' is missing but has a son"), node_(node) {}
  FatherMissing(const std::string& node, const std::string& context)
      : Error(context + ": node '" + node + "' is missing but has a son"), node_(node) {}
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

class SymbolOutOfRange : public Error {
 public:
  explicit SymbolOutOfRange(const std::string& what) : Error(what) {}
};

class ConfigMismatch : public Error {
 public:
  explicit ConfigMismatch(const std::string& what) : Error("configuration mismatch: " + what) {}
};

class EmptySample : public Error {
 public:
  EmptySample() : Error("sample is empty") {}
  explicit EmptySample(const std::string& what) : Error(what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UnknownResidue : public Error {
 public:
  UnknownResidue(char residue, std::size_t position, const std::string& record)
      : Error("unknown residue '" + std::string(1, residue) + "' at position " +
              std::to_string(position) + " in record '" + record + "'"),
        residue_(residue),
        position_(position) {}
  char residue() const { return residue_; }
  std::size_t position() const { return position_; }

 private:
  char residue_;
  std::size_t position_;
};

class SequenceTooShort : public Error {
 public:
  explicit SequenceTooShort(const std::string& what) : Error(what) {}
};

class NoMatchingContext : public Error {
 public:
  explicit NoMatchingContext(const std::string& what) : Error(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace treetest
