#pragma once

#include <stdexcept>
#include <string>

namespace siginv {

// Every error raised by the library derives from Error so callers can catch
// the whole family at once. The CLI maps the categories onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes (dimension, depth, vector width) disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input: short paths, bad letters, non-finite data.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A word is longer than the truncation depth it is paired against.
class DepthError : public Error {
 public:
  using Error::Error;
};

/// A dense tensor would exceed the configured coefficient budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent configuration or artifact metadata (fingerprints, widths).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Text or CSV that cannot be parsed. Carries the offending row when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long row = -1)
      : Error(row >= 0 ? what + " (row " + std::to_string(row) + ")" : what), row_(row) {}
  long row() const noexcept { return row_; }

 private:
  long row_;
};

/// Numerical breakdown (failed factorization, non-finite iterate).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace siginv
