#pragma once

#include <stdexcept>
#include <string>

namespace fdsched {

// Error taxonomy shared by the library and the CLI exit-code mapping.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A schedule violates its structural invariants (wrong length, out-of-range
// user id, duplicated user).
class InvalidScheduleError : public Error {
 public:
  using Error::Error;
};

// Operation inputs are inconsistent (dimension mismatch, infeasible selection,
// candidate already scheduled, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// An exhaustive search was requested on an instance above its size bounds.
class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

// Capacity bisection entered with a bracket whose endpoints do not verify as
// (stable, unstable).
class BracketInvalidError : public Error {
 public:
  using Error::Error;
};

// Config file cannot be parsed or contains unknown/ill-typed keys.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fdsched
