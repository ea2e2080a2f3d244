#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace depbound {

enum class ErrorKind {
  // input / parse errors
  Parse,
  // distribution construction
  NegativeProbability,
  MassNotOne,
  DuplicateOutcome,
  InvalidOutcome,
  InvalidVariable,
  // index sets
  EmptyIndexSet,
  IndexOutOfRange,
  OverlappingIndexSets,
  IndexSetTooSmall,
  // size caps
  SupportTooLarge,
  TooManyVariables,
  GraphTooLarge,
  LatticeTooLarge,
  TooLong,
  WindowTooLarge,
  // domain violations
  DomainViolation,
  NonpositiveLambda,
  NonpositiveT,
  LambdaOutOfRange,
  InvalidChi,
  InvalidP,
  BlockMismatch,
  BlocksDoNotCover,
  NoUniqueStationary,
  EmptyGrid,
  GridMismatch,
  LpDidNotConverge,
};

/// Coarse grouping used for process exit codes.
enum class ErrorCategory { Parse, SizeCap, Domain };

ErrorCategory category(ErrorKind kind);
std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return depbound::category(kind_); }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace depbound
