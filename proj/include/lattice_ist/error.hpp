#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace lattice_ist {

enum class ErrorCode {
  InvalidArgument,
  NotPalindromic,
  SingularAtOrigin,
  DidNotConverge,
  RootToleranceConflict,
  ComplexRootInsideDisc,
  NonSimpleEndpointZero,
  DivisionRemainder,
  RouteMismatch,
  NormingMismatch,
  SingularSystem,
  RootNearCircle,
  NotConjugateClosed,
  OddCount,
  ZeroCoefficientResidual,
  UnusualCase,
  Inconsistent,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. The code names the failure class;
/// `index()` carries the offending row for SingularSystem.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<int> index = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<int> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<int> index_;
};

}  // namespace lattice_ist
