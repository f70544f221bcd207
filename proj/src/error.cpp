#include "gene_atlas/error.hpp"

namespace gene_atlas {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kUnknownCategory: return "unknown_category";
    case ErrorCode::kUnknownTag: return "unknown_tag";
    case ErrorCode::kUnknownConcept: return "unknown_concept";
    case ErrorCode::kUnknownCostume: return "unknown_costume";
    case ErrorCode::kUnknownTheme: return "unknown_theme";
    case ErrorCode::kDuplicateId: return "duplicate_id";
    case ErrorCode::kValidationFailed: return "validation_failed";
    case ErrorCode::kInvalidPage: return "invalid_page";
    case ErrorCode::kEmptyQuery: return "empty_query";
    case ErrorCode::kCostumeMismatch: return "costume_mismatch";
    case ErrorCode::kMissingDecision: return "missing_decision";
    case ErrorCode::kInvalidDecision: return "invalid_decision";
    case ErrorCode::kStaleReport: return "stale_report";
    case ErrorCode::kImageDecode: return "image_decode";
    case ErrorCode::kThemeUnavailable: return "theme_unavailable";
    case ErrorCode::kUnresolvedPlaceholder: return "unresolved_placeholder";
    case ErrorCode::kInvalidTemplate: return "invalid_template";
    case ErrorCode::kProviderTimeout: return "provider_timeout";
    case ErrorCode::kProviderRefusal: return "provider_refusal";
    case ErrorCode::kUnknownProvider: return "unknown_provider";
    case ErrorCode::kMalformedDocument: return "malformed_document";
    case ErrorCode::kVersionMismatch: return "version_mismatch";
    case ErrorCode::kMalformedBody: return "malformed_body";
    case ErrorCode::kUnknownField: return "unknown_field";
    case ErrorCode::kLockHeld: return "lock_held";
    case ErrorCode::kPortBind: return "port_bind";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kUnknownRoute: return "unknown_route";
  }
  return "internal";
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedBody:
    case ErrorCode::kMalformedDocument:
    case ErrorCode::kVersionMismatch:
      return 400;
    case ErrorCode::kUnknownCategory:
    case ErrorCode::kUnknownTag:
    case ErrorCode::kUnknownCostume:
    case ErrorCode::kUnknownRoute:
      return 404;
    case ErrorCode::kDuplicateId:
    case ErrorCode::kLockHeld:
    case ErrorCode::kStaleReport:
      return 409;
    case ErrorCode::kProviderRefusal:
    case ErrorCode::kPortBind:
    case ErrorCode::kIo:
      return 502;
    case ErrorCode::kProviderTimeout:
      return 504;
    default:
      return 422;
  }
}

}  // namespace gene_atlas
