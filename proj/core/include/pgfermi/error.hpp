#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pgfermi {

enum class ErrorCode {
  ShapeMismatch,
  NoNullspace,
  DegenerateNullspace,
  Singular,
  DegreeOutOfRange,
  KindMismatch,
  ContextMismatch,
  NotUnitLeading,
  PairingSingular,
  TerminationFailure,
  BiorthogonalityFailure,
  InvalidParams,
  SingularBasis,
  DegenerateSpectrum,
  WeightLengthMismatch,
  FactorizationFailure,
  ReconstructionFailure,
  ParseError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pgfermi
