#pragma once

#include <stdexcept>
#include <string>

namespace wpart {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The operation needs Dirichlet metadata (r, A, D(0), ...) the sequence lacks.
class MissingMetaError : public DomainError {
 public:
  explicit MissingMetaError(const std::string& what)
      : DomainError("missing Dirichlet metadata: " + what) {}
};

/// Exact counting was asked for a non-integer multiplicity.
class IntegralityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// E Z_n(delta) = n has no root for the requested n.
class UnsolvableError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Argument sits on a pole of a special function.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative method stopped before reaching its tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed user configuration (weights spec, CLI flags, input files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace wpart
