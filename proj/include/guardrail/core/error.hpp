#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace guardrail {

enum class ErrorCode {
  EmptyText,
  UnknownPolicyId,
  BadJurisdictionTag,
  SpanOutOfRange,
  DuplicateDetectorId,
  OverlappingSpans,
  DegenerateCorpus,
  DuplicateDocId,
  EmptyCorpus,
  MalformedPredicate,
  DuplicateRuleId,
  UnknownAction,
  NoDetectorsApplicable,
  BindFailure,
  ConfigInvalid,
  VersionMismatch,
  ChecksumMismatch,
  IoFailure,
  NotFound,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every error raised by the library carries one of the codes above so that
// callers (HTTP layer, CLI) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace guardrail
