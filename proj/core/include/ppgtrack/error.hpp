#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ppgtrack {

enum class ErrorKind {
  kInvalidSignal,
  kInvalidConfig,
  kSessionTooShort,
  kInvalidBand,
  kBadEmbedLength,
  kDecompositionFailure,
  kNoReferencesFound,
  kFilterDiverged,
  kGridTooSmall,
  kEmptySpectrum,
  kLengthMismatch,
  kDegenerateTruth,
  kBadProfile,
  kParseError,
  kRateMissing,
  kColumnMismatch,
  kIoError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind and the module that
// produced it, so callers can branch on the kind and the CLI can print a
// "module: message" diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string_view module, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace ppgtrack
