#pragma once

#include <stdexcept>
#include <string>

namespace aqolab {

// The numeric value doubles as the CLI exit code.
enum class ErrorKind : int {
  parse = 1,
  precondition = 2,
  numerical = 3,
  precision = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::parse, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::precondition, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

// --- precondition family

class SizeError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DegenerateSpectrumError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class SpectralConditionError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class GeometryError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// --- numerical family

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ContinuityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StepSizeError : public NumericalError {
 public:
  StepSizeError(const std::string& what, double suggested_phase_per_step)
      : NumericalError(what), suggested_(suggested_phase_per_step) {}
  double suggested_phase_per_step() const noexcept { return suggested_; }

 private:
  double suggested_;
};

class InconsistentOracleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DecodeFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Carries the largest accuracy that would have let the computation succeed,
// as a decimal string so that tiny budgets survive the trip to JSON.
class PrecisionInsufficient : public Error {
 public:
  PrecisionInsufficient(const std::string& what, std::string required_epsilon)
      : Error(ErrorKind::precision, what), required_(std::move(required_epsilon)) {}
  const std::string& required_epsilon() const noexcept { return required_; }

 private:
  std::string required_;
};

}  // namespace aqolab
