#pragma once

#include <stdexcept>
#include <string>

namespace algoprice {

// Base for every failure that stems from the inputs or the model rather
// than from a programming bug. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidPdError : public DomainError {
 public:
  using DomainError::DomainError;
};

class CalibrationError : public Error {
 public:
  CalibrationError(const std::string& what, double residual_nash, double residual_joint)
      : Error(what), residual_nash(residual_nash), residual_joint(residual_joint) {}
  double residual_nash;
  double residual_joint;
};

class NoFixedPairError : public Error {
 public:
  using Error::Error;
};

class CycleForbiddenError : public Error {
 public:
  using Error::Error;
};

class InfeasibleSuccessorError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ExtractionError : public Error {
 public:
  using Error::Error;
};

}  // namespace algoprice
