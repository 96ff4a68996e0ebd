#pragma once

#include <stdexcept>
#include <string>

namespace cbs {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible length or shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of the operation
/// (negative entry, nonpositive weight, zero vector for an angle, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative kernel did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Matrix fails a definiteness or consistency requirement.
class DefinitenessError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input (schema violations, unreadable files).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace cbs
