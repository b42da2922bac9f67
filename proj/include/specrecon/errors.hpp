#pragma once

#include <stdexcept>
#include <string>

namespace specrecon {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (token count, non-numeric token, bad header).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Arguments violate an operation's precondition (sizes, symmetry, sortedness).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An eigenvalue index that is required to be simple lies in a larger cluster.
class NotSimpleError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Iterative method failed to meet its contract (sweep cap, bracket failure,
/// evaluation at a pole).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace specrecon
