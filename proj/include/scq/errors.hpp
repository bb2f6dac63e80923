#pragma once

#include <stdexcept>
#include <string>

namespace scq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad physical or numerical input: non-normalized states, non-unit axes,
/// out-of-domain energies, mismatched shapes.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidState : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidBloch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidAxis : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ShapeError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DomainError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class TruncationError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnsupportedKind : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DegenerateBisector : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnreachableAxis : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class MissingData : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Failures of the numerics themselves (non-finite values, unstable steps).
class NumericError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Configuration file / command-line problems. `line()` is 0 when the error
/// is not tied to a specific line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace scq
