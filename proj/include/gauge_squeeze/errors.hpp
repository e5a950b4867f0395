#pragma once

#include <stdexcept>
#include <string>

namespace gauge_squeeze {

// Base of every error raised by the library. Numerical failures map to CLI
// exit status 2, configuration/usage failures to 1.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public Error {
public:
  using Error::Error;
};

class DomainError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class UnstableSystem : public NumericalError {
public:
  UnstableSystem(const std::string& what, double abscissa)
      : NumericalError(what), spectral_abscissa(abscissa) {}
  double spectral_abscissa;
};

class SingularSolve : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class StepTooLarge : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class NonFiniteState : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class MethodDisagreement : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class Unphysical : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class SingularCovariance : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
public:
  NoConvergence(const std::string& what, double residual)
      : NumericalError(what), last_residual(residual) {}
  double last_residual;
};

class NoStablePoints : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace gauge_squeeze
