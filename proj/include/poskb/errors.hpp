#pragma once

#include <stdexcept>
#include <string>

namespace poskb {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed formula text. `offset` is the 0-based character position.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& what_failed)
      : Error("syntax error at offset " + std::to_string(offset) + ": " + what_failed),
        offset(offset) {}
  std::size_t offset;
};

/// Atom name not present in the vocabulary in use.
class UnknownAtomError : public Error {
 public:
  explicit UnknownAtomError(const std::string& atom)
      : Error("unknown atom '" + atom + "'"), atom(atom) {}
  std::string atom;
};

/// Malformed CSV input (including an empty dataset).
class CsvError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid tree document.
class TreeFormatError : public Error {
 public:
  using Error::Error;
};

/// Malformed knowledge-base file.
class KbFormatError : public Error {
 public:
  using Error::Error;
};

/// Weight outside (0, 1] or unparsable.
class InvalidWeightError : public Error {
 public:
  using Error::Error;
};

/// Operation requires every entry to normalize to a single clause.
class NotClausalError : public Error {
 public:
  using Error::Error;
};

/// Entry index out of range.
class InvalidIndexError : public Error {
 public:
  using Error::Error;
};

/// Level-merge target outside [1, current level count].
class InvalidLevelsError : public Error {
 public:
  using Error::Error;
};

/// Evidence formula is unsatisfiable on its own.
class InconsistentEvidenceError : public Error {
 public:
  using Error::Error;
};

/// Probabilistic semantics requested on a base not flagged probabilistic.
class NotProbabilisticError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration refused: vocabulary too large.
class VocabTooLargeError : public Error {
 public:
  using Error::Error;
};

}  // namespace poskb
