#include "depbound/error.hpp"

namespace depbound {

ErrorCategory category(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
      return ErrorCategory::Parse;
    case ErrorKind::SupportTooLarge:
    case ErrorKind::TooManyVariables:
    case ErrorKind::GraphTooLarge:
    case ErrorKind::LatticeTooLarge:
    case ErrorKind::TooLong:
    case ErrorKind::WindowTooLarge:
      return ErrorCategory::SizeCap;
    default:
      return ErrorCategory::Domain;
  }
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::NegativeProbability: return "NegativeProbability";
    case ErrorKind::MassNotOne: return "MassNotOne";
    case ErrorKind::DuplicateOutcome: return "DuplicateOutcome";
    case ErrorKind::InvalidOutcome: return "InvalidOutcome";
    case ErrorKind::InvalidVariable: return "InvalidVariable";
    case ErrorKind::EmptyIndexSet: return "EmptyIndexSet";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::OverlappingIndexSets: return "OverlappingIndexSets";
    case ErrorKind::IndexSetTooSmall: return "IndexSetTooSmall";
    case ErrorKind::SupportTooLarge: return "SupportTooLarge";
    case ErrorKind::TooManyVariables: return "TooManyVariables";
    case ErrorKind::GraphTooLarge: return "GraphTooLarge";
    case ErrorKind::LatticeTooLarge: return "LatticeTooLarge";
    case ErrorKind::TooLong: return "TooLong";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NonpositiveLambda: return "NonpositiveLambda";
    case ErrorKind::NonpositiveT: return "NonpositiveT";
    case ErrorKind::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorKind::InvalidChi: return "InvalidChi";
    case ErrorKind::InvalidP: return "InvalidP";
    case ErrorKind::BlockMismatch: return "BlockMismatch";
    case ErrorKind::BlocksDoNotCover: return "BlocksDoNotCover";
    case ErrorKind::NoUniqueStationary: return "NoUniqueStationary";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::LpDidNotConverge: return "LpDidNotConverge";
  }
  return "Unknown";
}

}  // namespace depbound
