#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or non-conforming input (dimensions, non-finite values, asymmetry).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A factorization or numeric kernel failed to produce a usable result.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An operand does not satisfy the algebraic property an operation relies on.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The requested solve strategy does not apply to the given instance.
class UnsupportedStrategyError : public Error {
 public:
  using Error::Error;
};

/// Text-format parse failure, carrying the 1-based line number (0 if unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sgi
