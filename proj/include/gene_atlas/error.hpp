#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gene_atlas {

// Machine-readable failure categories shared by the library, the CLI and the
// HTTP service. Each code maps to exactly one HTTP status.
enum class ErrorCode {
  kInvalidArgument,
  kEmptyInput,
  kUnknownCategory,
  kUnknownTag,
  kUnknownConcept,
  kUnknownCostume,
  kUnknownTheme,
  kDuplicateId,
  kValidationFailed,
  kInvalidPage,
  kEmptyQuery,
  kCostumeMismatch,
  kMissingDecision,
  kInvalidDecision,
  kStaleReport,
  kImageDecode,
  kThemeUnavailable,
  kUnresolvedPlaceholder,
  kInvalidTemplate,
  kProviderTimeout,
  kProviderRefusal,
  kUnknownProvider,
  kMalformedDocument,
  kVersionMismatch,
  kMalformedBody,
  kUnknownField,
  kLockHeld,
  kPortBind,
  kIo,
  kUnknownRoute,
};

std::string_view to_string(ErrorCode code);
int http_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gene_atlas
