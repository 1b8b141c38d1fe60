#pragma once

#include <stdexcept>
#include <string>

namespace hs2 {

/// A precondition on an argument was violated. The message names the field.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base for failures of a numerical procedure on otherwise valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonIntegrable : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OptimizationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InconsistentClassification : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Raised when the input sits on a special parameter set that the requested
/// operation does not cover (e.g. constant coupling function).
class SpecialCase : public std::runtime_error {
 public:
  SpecialCase(std::string label, const std::string& what)
      : std::runtime_error(what), label_(std::move(label)) {}
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
};

}  // namespace hs2
