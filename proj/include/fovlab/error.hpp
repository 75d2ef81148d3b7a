#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fovlab {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonSquare,
  SingularBasis,
  DefectiveMatrix,
  NonConvergence,
  EmptyInput,
  ZeroVector,
  DegeneratePair,
  InvalidM,
  RankDeficientBasis,
  ComplexSpectrum,
  SandwichViolation,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::DefectiveMatrix: return "DefectiveMatrix";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::InvalidM: return "InvalidM";
    case ErrorCode::RankDeficientBasis: return "RankDeficientBasis";
    case ErrorCode::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorCode::SandwichViolation: return "SandwichViolation";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Input file errors. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorCode::ParseError, what + " (line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace fovlab
