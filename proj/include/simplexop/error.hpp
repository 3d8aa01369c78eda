#pragma once

#include <stdexcept>
#include <string>

namespace simplexop {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid model parameters (for instance s >= n/2 for the Stancu operator).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class UnboundedComplementError : public Error {
 public:
  using Error::Error;
};

class DegenerateNFunctionError : public Error {
 public:
  using Error::Error;
};

/// A quadrature node produced a non-finite integrand value.
class IntegrandError : public Error {
 public:
  using Error::Error;
};

/// The modular is non-finite at every probed scale: the field is not in the
/// Orlicz class numerically.
class NormOverflowError : public Error {
 public:
  using Error::Error;
};

/// Dual witness g violates the constraint on its complementary modular.
class ConstraintViolationError : public Error {
 public:
  using Error::Error;
};

/// The MKZ series could not accumulate enough weight within its degree cap.
class TruncationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace simplexop
