#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tripol {

/// Bad argument value or shape (mode index out of range, eta outside [0,1], ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The call is well-formed but the state does not satisfy the operation's
/// precondition (e.g. squeezing a mode that is already correlated).
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Inputs outside the configuration the criterion forms are defined for.
class UnsupportedConfiguration : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-PSD covariance, degenerate shot-noise normalization, flat quadratic.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Circuit DSL diagnostic carrying the source location.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& reason)
      : std::runtime_error(reason + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        line_(line),
        column_(column),
        reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string reason_;
};

}  // namespace tripol
