#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thermovi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state left the domain where the model is defined (x <= 0, x <= b, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Temperature (-dL/dS, or D_S L_d in the discrete setting) vanished.
class TemperatureDegenerateError : public Error {
 public:
  using Error::Error;
};

/// A linear map that the theory requires to be invertible was singular.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// The flat map of a point structure is not an isomorphism.
class StructureDegenerateError : public SingularMatrixError {
 public:
  using SingularMatrixError::SingularMatrixError;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Failure while advancing a path; carries the index of the step being computed.
class StepFailure : public Error {
 public:
  StepFailure(std::size_t step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace thermovi
