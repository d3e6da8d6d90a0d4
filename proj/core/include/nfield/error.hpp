#pragma once

#include <stdexcept>
#include <string>

namespace nfield {

enum class ErrorCode {
  UnsupportedDerivativeOrder,
  DegenerateLeading,
  SingularVandermonde,
  RepeatedRoots,
  NearSingularEntry,
  EssentialPoint,
  NoConvergence,
  RegionAbort,
  NotAnEigenvalue,
  TSingular,
  AtEigenvalue,
  ProportionalityFailure,
  Resonance,
  UnsupportedMesh,
  StepMismatch,
  Blowup,
  NoCycle,
  ConfigError,
};

// Stable upper-case identifier, e.g. "T_SINGULAR". Used in reports and CLI
// diagnostics.
const char* to_string(ErrorCode code);

class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nfield
