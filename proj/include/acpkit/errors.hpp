#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace acp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text.
class ParseError : public Error {
 public:
  enum class Kind { Syntax, UndeclaredAction, MixedMergeWithoutParens };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        kind_(kind),
        line_(line),
        column_(column) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that violates a semantic requirement (guardedness,
/// alphabet membership, associativity of the communication function).
class ValidationError : public Error {
 public:
  enum class Kind {
    DuplicateLhs,
    UnboundVariable,
    UnguardedAfterBudget,
    UnknownAction,
    NotAssociative,
    UnguardedTerm,
    UnknownRoot,
  };

  ValidationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A resource budget was exhausted before a result could be established.
class BudgetError : public Error {
 public:
  enum class Kind {
    FuelExhausted,
    StateBudgetExceeded,
    UnguardedRecursionDepth,
    InconclusiveTruncated,
    BoundExceeded,
  };

  BudgetError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace acp
