#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctqw {

enum class ErrorKind {
  NoAtoms,
  MalformedRecord,
  InvalidIdentifier,
  NetworkFailure,
  NotFound,
  DuplicateResidueKey,
  CoincidentResidues,
  NotSymmetric,
  ConvergenceFailure,
  NotConverged,
  DimensionMismatch,
  HorizonOutsideGrid,
  NotConvergedWithin,
  WindowTooLarge,
  IsolatedNode,
  Disconnected,
  NonStochastic,
  DegenerateInput,
  UnknownKeyLabels,
  NotNormalized,
  TooLarge,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can emit structured error reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ctqw
