#pragma once

#include <stdexcept>
#include <string>

namespace dfcnn {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or arguments supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Input data that is missing, malformed, or too short for the request.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Non-finite inputs or a diverging computation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Tensor or parameter dimensions that do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An operation invoked in the wrong order (e.g. backward before forward).
class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace dfcnn
