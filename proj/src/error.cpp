#include "ctqw/error.hpp"

namespace ctqw {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NoAtoms: return "NoAtoms";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::InvalidIdentifier: return "InvalidIdentifier";
    case ErrorKind::NetworkFailure: return "NetworkFailure";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::DuplicateResidueKey: return "DuplicateResidueKey";
    case ErrorKind::CoincidentResidues: return "CoincidentResidues";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::HorizonOutsideGrid: return "HorizonOutsideGrid";
    case ErrorKind::NotConvergedWithin: return "NotConvergedWithin";
    case ErrorKind::WindowTooLarge: return "WindowTooLarge";
    case ErrorKind::IsolatedNode: return "IsolatedNode";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NonStochastic: return "NonStochastic";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::UnknownKeyLabels: return "UnknownKeyLabels";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace ctqw
