#ifndef CAUSALFUSE_ERRORS_HPP_
#define CAUSALFUSE_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace causalfuse {

/// Base class for all domain errors raised by the library.
/// The CLI maps these to exit code 1; usage errors are handled separately.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in a formula, tree, HTA or JSON document. Carries a
/// 1-based line/column pair pointing at the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", col " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A model violates a structural invariant (cycle, unbound variable, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Recorded evidence is self-contradictory or inconsistent with the model.
class EvidenceError : public Error {
 public:
  using Error::Error;
};

/// An exponential search was refused or aborted. Raised instead of silently
/// truncating results.
class SearchCapError : public Error {
 public:
  using Error::Error;
};

}  // namespace causalfuse

#endif  // CAUSALFUSE_ERRORS_HPP_
