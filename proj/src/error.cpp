#include "confgeo/error.hpp"

namespace confgeo {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DegenerateMetric: return "DegenerateMetric";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::VarianceMismatch: return "VarianceMismatch";
    case ErrorCode::NullSeed: return "NullSeed";
    case ErrorCode::DegenerateFlag: return "DegenerateFlag";
    case ErrorCode::DomainTooSmall: return "DomainTooSmall";
    case ErrorCode::DimensionTooLow: return "DimensionTooLow";
    case ErrorCode::FrameNotOrthonormal: return "FrameNotOrthonormal";
    case ErrorCode::LorentzianUnsupported: return "LorentzianUnsupported";
    case ErrorCode::NotAPlane: return "NotAPlane";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateInducedMetric: return "DegenerateInducedMetric";
    case ErrorCode::NullNormal: return "NullNormal";
    case ErrorCode::NotUmbilic: return "NotUmbilic";
    case ErrorCode::NonConstantGauge: return "NonConstantGauge";
    case ErrorCode::AmbientNotSelfDual: return "AmbientNotSelfDual";
    case ErrorCode::NoNullVectors: return "NoNullVectors";
    case ErrorCode::LeftDomain: return "LeftDomain";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::NotIsotropic: return "NotIsotropic";
    case ErrorCode::NotPregeodesic: return "NotPregeodesic";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnresolvedReference: return "UnresolvedReference";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {

std::string describe(int line, int column, const std::vector<std::string>& expected,
                     const std::string& found) {
  std::string msg = "line " + std::to_string(line) + ", column " + std::to_string(column) +
                    ": unexpected " + found + ", expected one of {";
  for (size_t i = 0; i < expected.size(); ++i) {
    if (i) msg += ", ";
    msg += expected[i];
  }
  return msg + "}";
}

}  // namespace

SyntaxError::SyntaxError(int line, int column, std::vector<std::string> expected,
                         const std::string& found)
    : Error(ErrorCode::SyntaxError, describe(line, column, expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace confgeo
