#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gonsel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (OBO stanza, GAF row, config file).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error(message + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input describing an invalid graph (cycle, dangling edge).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Unknown term or protein accession.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Precondition violation on an otherwise valid object.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Guard for runs that would produce no output (no eligible terms, ...).
/// Mapped to its own CLI exit code so scripts can tell it from failure.
class EmptyResultError : public Error {
 public:
  using Error::Error;
};

}  // namespace gonsel
