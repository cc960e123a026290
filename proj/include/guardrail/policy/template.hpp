#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "guardrail/core/types.hpp"
#include "guardrail/pii/redact.hpp"
#include "guardrail/policy/predicate.hpp"

namespace guardrail::policy {

struct PolicyRule {
  std::string rule_id;
  Predicate when;
  Decision action = Decision::Pass;
  pii::RedactStyle mask_style = pii::RedactStyle::MaskType;  // MASK rules only
  std::string message;
  int line = 0;  // 1-based position in the source document, 0 if unknown
};

struct PolicyTemplate {
  std::string policy_id;
  std::string jurisdiction = "default";
  std::vector<PolicyRule> rules;  // rule ids unique
  Decision default_action = Decision::Pass;
  std::string block_message;

  const PolicyRule* find_rule(std::string_view rule_id) const;
};

inline constexpr std::string_view kDefaultBlockMessage = "This content was blocked by policy.";

// Category -> privacy level rows for one jurisdiction. Keys may be globs.
struct JurisdictionTable {
  std::string jurisdiction;
  std::map<std::string, Sensitivity> levels;
};

using JurisdictionTables = std::map<std::string, JurisdictionTable>;

// Same shape as the policy document, usable as input to parse_policy.
nlohmann::json to_json(const PolicyTemplate& t);

}  // namespace guardrail::policy
