#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace g3 {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed bracketed parse; carries the character offset of the problem.
class ParseFormatError : public Error {
 public:
  ParseFormatError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Invalid input data (schemas, ids, preconditions).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written, or is not valid structured text.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Inference could not find any candidate for a constituent.
class UngroundableError : public Error {
 public:
  using Error::Error;
};

/// Optimizer did not reach the requested gradient tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace g3
