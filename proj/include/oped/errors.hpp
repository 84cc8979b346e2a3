#pragma once

#include <stdexcept>
#include <string>

namespace oped {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments, mismatched geometry, malformed documents.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Iteration failed to converge or a non-finite value appeared.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace oped
