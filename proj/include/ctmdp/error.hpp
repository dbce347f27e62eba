#pragma once

#include <stdexcept>
#include <string>

namespace ctmdp {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something malformed: bad arguments, an invalid instance
/// file, parameters outside a construction's admissible range.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Two grid-valued objects were combined on different grids.
class GridMismatch : public InvalidInput {
 public:
  GridMismatch() : InvalidInput("grid mismatch") {}
};

}  // namespace ctmdp
