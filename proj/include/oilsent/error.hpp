#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oilsent {

/// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input is syntactically broken (bad CSV row, unparseable date, bad response).
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Input parses but breaks an invariant (duplicate id, non-positive close, ...).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Lexicon file does not match its schema.
class SchemaError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

/// A caller-side precondition was violated.
class PreconditionError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

/// Nothing left to work on after alignment or filtering.
class EmptyInputError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace oilsent
