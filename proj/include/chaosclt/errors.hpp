#pragma once

#include <stdexcept>
#include <string>

namespace chaosclt {

// Invalid arguments, violated preconditions, malformed input files.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Kernel representation that an operation cannot handle (e.g. sampling a
// dense kernel of order >= 3).
class UnsupportedRepresentation : public DomainError {
 public:
  using DomainError::DomainError;
};

// Parse failure with a position in the input text and, optionally, the name
// of the source it came from.
class ParseError : public DomainError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message,
             const std::string& source = "")
      : DomainError((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) +
                    ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

  ParseError with_source(const std::string& source) const {
    return ParseError(line_, column_, message_, source);
  }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

// The data is well-formed but a numerical requirement fails: a covariance
// that is not positive semidefinite, a mixed inner product that is negative
// beyond rounding tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace chaosclt
