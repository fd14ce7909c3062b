#pragma once

#include <stdexcept>
#include <string>

namespace revnorm {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An index, degree or domain does not match what the operation expects.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A polynomial failed a parity or symmetry precondition.
class ParityError : public Error {
 public:
  using Error::Error;
};

}  // namespace revnorm
