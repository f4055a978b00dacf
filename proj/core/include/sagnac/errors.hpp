#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sagnac {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A driving profile that cannot be integrated or violates the half-turn constraint.
class InvalidProfile : public Error {
 public:
  using Error::Error;
};

/// Fock truncation too small for the requested state or operator.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, std::size_t required)
      : Error(what), required_(required) {}

  /// Smallest truncation that satisfies the violated bound (0 if unknown).
  std::size_t required_truncation() const noexcept { return required_; }

 private:
  std::size_t required_;
};

/// Multi-site Hilbert space exceeds the dense-simulation envelope.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

/// Internal identities that should hold exactly were violated (bad inputs or a bug).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Numerical differentiation produced a result that fails its own sanity checks.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration; the message names the source line or key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A computed result failed a cross-check that the output promises.
class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace sagnac
