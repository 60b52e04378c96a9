#pragma once

#include <stdexcept>
#include <string>

namespace sinrsched {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or contract-violating input (bad JSON, broken invariants,
/// out-of-range indices). The CLI maps this to exit code 2.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The requested objective has no finite optimum (unbounded utility with
/// unlimited power, or a positive demand that no slot can serve).
class Unbounded : public Error {
 public:
  using Error::Error;
};

}  // namespace sinrsched
