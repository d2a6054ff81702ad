#include "ppgtrack/error.hpp"

namespace ppgtrack {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidSignal: return "InvalidSignal";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kSessionTooShort: return "SessionTooShort";
    case ErrorKind::kInvalidBand: return "InvalidBand";
    case ErrorKind::kBadEmbedLength: return "BadEmbedLength";
    case ErrorKind::kDecompositionFailure: return "DecompositionFailure";
    case ErrorKind::kNoReferencesFound: return "NoReferencesFound";
    case ErrorKind::kFilterDiverged: return "FilterDiverged";
    case ErrorKind::kGridTooSmall: return "GridTooSmall";
    case ErrorKind::kEmptySpectrum: return "EmptySpectrum";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kDegenerateTruth: return "DegenerateTruth";
    case ErrorKind::kBadProfile: return "BadProfile";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kRateMissing: return "RateMissing";
    case ErrorKind::kColumnMismatch: return "ColumnMismatch";
    case ErrorKind::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, std::string_view module, const std::string& message)
    : std::runtime_error(std::string(module) + ": " + std::string(to_string(kind)) + ": " +
                         message),
      kind_(kind),
      module_(module) {}

}  // namespace ppgtrack
