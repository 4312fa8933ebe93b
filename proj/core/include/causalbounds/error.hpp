#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace causalbounds {

/// Broad failure class; the CLI maps these onto exit codes 1 and 2.
enum class ErrorClass { input, computation };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorClass::input, what) {}
};

class ComputationError : public Error {
 public:
  explicit ComputationError(const std::string& what) : Error(ErrorClass::computation, what) {}
};

// ---- input errors ---------------------------------------------------------

struct Violation {
  std::string code;
  std::string message;
  friend bool operator==(const Violation&, const Violation&) = default;
};
using ValidationReport = std::vector<Violation>;

class ValidationError : public InputError {
 public:
  explicit ValidationError(ValidationReport report);
  ValidationError(const std::string& what, ValidationReport report)
      : InputError(what), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

class EmptyDataError : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

/// Malformed cell in a delimited data file; `row` is 1-based and counts the header.
class DataFormatError : public InputError {
 public:
  DataFormatError(const std::string& what, std::size_t row) : InputError(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class IoError : public InputError {
 public:
  using InputError::InputError;
};

class BindingError : public InputError {
 public:
  using InputError::InputError;
};

class TooManyPointsError : public InputError {
 public:
  using InputError::InputError;
};

// ---- computation errors ---------------------------------------------------

class PositivityError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class SeparationError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class ConvergenceError : public ComputationError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> gradient_trace)
      : ComputationError(what), trace_(std::move(gradient_trace)) {}
  /// Gradient norm after each Newton iteration.
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

class SingularDesignError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class EvaluationError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

/// A mechanism function returned a value outside [0,1].
class ModelConstraintError : public ComputationError {
 public:
  ModelConstraintError(const std::string& what, std::string function, double value)
      : ComputationError(what), function_(std::move(function)), value_(value) {}
  const std::string& function() const noexcept { return function_; }
  double value() const noexcept { return value_; }

 private:
  std::string function_;
  double value_;
};

class SingularityError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class SearchAbortedError : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace causalbounds
