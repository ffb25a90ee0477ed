#pragma once

#include <stdexcept>
#include <string>

namespace entroof {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatches, out-of-range parameters, malformed inputs.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A quantum-state invariant does not hold. `invariant()` names it
/// ("trace", "hermiticity", "positivity", "normalization", "dimension", ...).
class ValidationError : public Error {
 public:
  ValidationError(std::string invariant, const std::string& what)
      : Error(invariant + ": " + what), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

/// An iterative kernel hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace entroof
