#pragma once

#include <stdexcept>
#include <string>

namespace cflow {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A curve that must be a Jordan polygon is not one.
class InvalidCurveError : public Error {
 public:
  using Error::Error;
};

// The numerical scheme produced something the true flow cannot (self-crossing,
// runaway step count).
class DiscretizationError : public Error {
 public:
  using Error::Error;
};

// Malformed input file or configuration.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace cflow
