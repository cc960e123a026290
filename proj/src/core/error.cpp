#include "guardrail/core/error.hpp"

namespace guardrail {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyText: return "EMPTY_TEXT";
    case ErrorCode::UnknownPolicyId: return "UNKNOWN_POLICY_ID";
    case ErrorCode::BadJurisdictionTag: return "BAD_JURISDICTION_TAG";
    case ErrorCode::SpanOutOfRange: return "SPAN_OUT_OF_RANGE";
    case ErrorCode::DuplicateDetectorId: return "DUPLICATE_DETECTOR_ID";
    case ErrorCode::OverlappingSpans: return "OVERLAPPING_SPANS";
    case ErrorCode::DegenerateCorpus: return "DEGENERATE_CORPUS";
    case ErrorCode::DuplicateDocId: return "DUPLICATE_DOC_ID";
    case ErrorCode::EmptyCorpus: return "EMPTY_CORPUS";
    case ErrorCode::MalformedPredicate: return "MALFORMED_PREDICATE";
    case ErrorCode::DuplicateRuleId: return "DUPLICATE_RULE_ID";
    case ErrorCode::UnknownAction: return "UNKNOWN_ACTION";
    case ErrorCode::NoDetectorsApplicable: return "NO_DETECTORS_APPLICABLE";
    case ErrorCode::BindFailure: return "BIND_FAILURE";
    case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::VersionMismatch: return "VERSION_MISMATCH";
    case ErrorCode::ChecksumMismatch: return "CHECKSUM_MISMATCH";
    case ErrorCode::IoFailure: return "IO_FAILURE";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace guardrail
