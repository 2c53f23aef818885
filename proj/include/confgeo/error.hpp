#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace confgeo {

enum class ErrorCode {
  SyntaxError = 1,
  UnknownIdentifier,
  DomainError,
  DegenerateMetric,
  SignatureMismatch,
  VarianceMismatch,
  NullSeed,
  DegenerateFlag,
  DomainTooSmall,
  DimensionTooLow,
  FrameNotOrthonormal,
  LorentzianUnsupported,
  NotAPlane,
  RankDeficient,
  DegenerateInducedMetric,
  NullNormal,
  NotUmbilic,
  NonConstantGauge,
  AmbientNotSelfDual,
  NoNullVectors,
  LeftDomain,
  StepFailure,
  HypothesisViolated,
  NotIsotropic,
  NotPregeodesic,
  ParseError,
  SchemaError,
  UnresolvedReference,
  InvalidArgument,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failure with a 1-based source position and the set of tokens that
// would have been accepted there.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::vector<std::string> expected,
              const std::string& found);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace confgeo
