#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace docre {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid schema configuration (duplicate or overlapping tokens, bad arity).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A document cannot be rendered as a target string.
class LinearizationError : public Error {
 public:
  using Error::Error;
};

// Malformed corpus or record input. Carries the 1-based line number when known.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::size_t line = 0)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace docre
