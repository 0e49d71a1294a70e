#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hcivalue {

/// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates one of its type invariants (bad probabilities, duplicate labels, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of an operation (n = 0, non-positive time, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two inputs that must share a label set or dimension do not.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input: bit strings, CSV fields, JSON documents.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's contract (e.g. concatenating alphabets without codewords).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// An alphabet is too large to enumerate.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Collected per-row failures from CSV ingestion.
class IngestError : public FormatError {
 public:
  struct RowError {
    std::size_t line;
    std::string message;
  };

  explicit IngestError(std::vector<RowError> rows);

  const std::vector<RowError>& rows() const noexcept { return rows_; }

 private:
  std::vector<RowError> rows_;
};

}  // namespace hcivalue
