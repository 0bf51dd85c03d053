#include "pmelab/error.hpp"

namespace pmelab {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::OutOfChart: return "OutOfChart";
    case ErrorCode::DegenerateDimension: return "DegenerateDimension";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFiniteField: return "NonFiniteField";
    case ErrorCode::UnknownCase: return "UnknownCase";
    case ErrorCode::BlowUp: return "BlowUp";
    case ErrorCode::StepCollapse: return "StepCollapse";
    case ErrorCode::NonPositiveV: return "NonPositiveV";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::EmptyCylinder: return "EmptyCylinder";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::BadWindow: return "BadWindow";
    case ErrorCode::StiffBlowup: return "StiffBlowup";
    case ErrorCode::InsufficientLadder: return "InsufficientLadder";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace pmelab
