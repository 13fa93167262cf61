#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace h8 {

/// Base of every error the library raises. Callers that only need a message
/// can catch this; the CLI maps the concrete types to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation at (or too close to) a pole of a constituent function.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A near-singular denominator in a series evaluation.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// Query outside the range covered by a table or a zero set.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Work or memory estimate above the configured budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class InsufficientZeros : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& content)
      : Error("parse error at line " + std::to_string(line) + ": '" + content + "'"),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace h8
