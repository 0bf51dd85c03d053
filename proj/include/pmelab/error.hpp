#pragma once

#include <stdexcept>
#include <string>

namespace pmelab {

enum class ErrorCode {
  SingularMetric,
  OutOfChart,
  DegenerateDimension,
  UnsupportedModel,
  ShapeMismatch,
  NonFiniteField,
  UnknownCase,
  BlowUp,
  StepCollapse,
  NonPositiveV,
  NonPositiveInput,
  ExponentOutOfRange,
  EmptyCylinder,
  HypothesisViolated,
  BadWindow,
  StiffBlowup,
  InsufficientLadder,
  ConfigError,
  MissingArtifact,
  InvalidArgument,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pmelab
