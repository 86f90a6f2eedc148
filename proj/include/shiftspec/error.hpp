#pragma once

#include <stdexcept>
#include <string>

namespace shiftspec {

enum class ErrorCode {
  NegativeWeight,
  BoundExceeded,
  HorizonMismatch,
  InsufficientHorizon,
  UnknownConstruction,
  InvalidArgument,
  NotPeriodic,
  NonConvergence,
  ZeroWeightOnSide,
  ZeroPatternUndeclared,
  ZeroVector,
  SVEPViolated,
  SeriesDiverged,
  RadiusInsideSpectrum,
  MalformedSpec,
  Internal,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::BoundExceeded: return "BoundExceeded";
    case ErrorCode::HorizonMismatch: return "HorizonMismatch";
    case ErrorCode::InsufficientHorizon: return "InsufficientHorizon";
    case ErrorCode::UnknownConstruction: return "UnknownConstruction";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPeriodic: return "NotPeriodic";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ZeroWeightOnSide: return "ZeroWeightOnSide";
    case ErrorCode::ZeroPatternUndeclared: return "ZeroPatternUndeclared";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::SVEPViolated: return "SVEPViolated";
    case ErrorCode::SeriesDiverged: return "SeriesDiverged";
    case ErrorCode::RadiusInsideSpectrum: return "RadiusInsideSpectrum";
    case ErrorCode::MalformedSpec: return "MalformedSpec";
    case ErrorCode::Internal: return "Internal";
  }
  return "Internal";
}

class ShiftError : public std::runtime_error {
 public:
  ShiftError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Stable process exit codes for the command-line tool.
inline int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::NegativeWeight:
    case ErrorCode::BoundExceeded:
    case ErrorCode::UnknownConstruction:
    case ErrorCode::InvalidArgument:
    case ErrorCode::NotPeriodic:
    case ErrorCode::ZeroPatternUndeclared:
    case ErrorCode::ZeroVector:
    case ErrorCode::MalformedSpec:
    case ErrorCode::RadiusInsideSpectrum:
      return 2;
    case ErrorCode::HorizonMismatch:
    case ErrorCode::InsufficientHorizon:
    case ErrorCode::NonConvergence:
      return 3;
    case ErrorCode::SVEPViolated:
      return 4;
    default:
      return 5;
  }
}

}  // namespace shiftspec
