#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpart {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 means the error is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class SelfLoopError : public ParseError {
 public:
  using ParseError::ParseError;
};

class IndexRangeError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DuplicateEdgeError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Arguments violate a documented precondition (sizes, probabilities, lengths).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraphError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace gpart
