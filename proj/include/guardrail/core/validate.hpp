#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "guardrail/core/error.hpp"
#include "guardrail/core/types.hpp"

namespace guardrail {

struct ValidationError {
  ErrorCode code;
  std::string field;
  std::string message;
};

using PolicyResolver = std::function<bool(std::string_view policy_id)>;

bool is_valid_jurisdiction_tag(std::string_view tag);

// Checks fields in declaration order and reports the first violation.
std::optional<ValidationError> validate_request(const ShieldRequest& req,
                                                const PolicyResolver& policy_exists);

}  // namespace guardrail
