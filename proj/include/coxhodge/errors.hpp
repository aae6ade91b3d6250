#pragma once

#include <stdexcept>
#include <string>

namespace coxhodge {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: bad matrix, bad word, unparsable polynomial.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NotReduced : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class NonLinear : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class DegreeMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class NotSymmetric : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Enumeration of the group did not close within the given bound.
class GroupInfinite : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed.  Indicates a bug, not bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

#define COXHODGE_CHECK(cond, msg)                                  \
  do {                                                             \
    if (!(cond)) throw ::coxhodge::InternalError(std::string(msg)); \
  } while (0)

}  // namespace coxhodge
