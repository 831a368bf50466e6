#pragma once

#include <stdexcept>
#include <string>

namespace specflow {

// Bad arguments or inconsistent inputs (CLI maps these to exit code 2).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : UsageError {
  using UsageError::UsageError;
};

struct InvalidModeError : UsageError {
  using UsageError::UsageError;
};

struct ParameterError : UsageError {
  using UsageError::UsageError;
};

// Numerical failures (CLI exit code 1).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstructionError : NumericalError {
  using NumericalError::NumericalError;
};

struct ValidationError : NumericalError {
  using NumericalError::NumericalError;
};

struct PoleModeError : NumericalError {
  using NumericalError::NumericalError;
};

struct BackendMismatchError : NumericalError {
  using NumericalError::NumericalError;
};

struct MultiCrossingError : NumericalError {
  MultiCrossingError(const std::string& what, long k_, long m_)
      : NumericalError(what), k(k_), m(m_) {}
  long k;
  long m;
};

struct DegeneracyError : NumericalError {
  using NumericalError::NumericalError;
};

struct DataInconsistencyError : NumericalError {
  using NumericalError::NumericalError;
};

struct LemmaViolationError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace specflow
