#include "guardrail/core/validate.hpp"

#include <algorithm>

#include "guardrail/core/tokenize.hpp"
#include "guardrail/core/utf8.hpp"

namespace guardrail {

bool is_valid_jurisdiction_tag(std::string_view tag) {
  if (tag.empty() || tag.size() > 32) return false;
  if (tag.front() < 'a' || tag.front() > 'z') return false;
  return std::all_of(tag.begin(), tag.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

std::optional<ValidationError> validate_request(const ShieldRequest& req,
                                                const PolicyResolver& policy_exists) {
  Utf8Text text(req.text);
  bool blank = true;
  for (std::size_t i = 0; i < text.size() && blank; ++i) blank = is_space(text.at(i));
  if (blank) {
    return ValidationError{ErrorCode::EmptyText, "text", "text is empty after trimming whitespace"};
  }
  if (!is_valid_jurisdiction_tag(req.jurisdiction)) {
    return ValidationError{ErrorCode::BadJurisdictionTag, "jurisdiction",
                           "jurisdiction tag '" + req.jurisdiction + "' is not a lowercase identifier"};
  }
  if (req.policy_ids.empty()) {
    return ValidationError{ErrorCode::UnknownPolicyId, "policy_ids", "no policy selected"};
  }
  for (const auto& id : req.policy_ids) {
    if (!policy_exists || !policy_exists(id)) {
      return ValidationError{ErrorCode::UnknownPolicyId, "policy_ids", "unknown policy '" + id + "'"};
    }
  }
  return std::nullopt;
}

}  // namespace guardrail
