#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "guardrail/policy/template.hpp"

namespace guardrail::policy {

/// Policy document (YAML; JSON is accepted as a subset):
///
///   policy_id: default            # [A-Za-z0-9_.-]+
///   jurisdiction: default         # jurisdiction tag
///   default_action: PASS          # PASS | WARN | MASK | BLOCK
///   block_message: "..."          # optional
///   rules:
///     - id: mask-pii
///       when: category(pii.*)     # predicate expression
///       action: MASK
///       mask_style: MASK_TYPE     # MASK_TYPE | REDACT_FULL, MASK rules only
///       message: "..."            # optional
///
/// The whole document is rejected on the first error; messages carry
/// "source:line:column". Codes: MALFORMED_PREDICATE, DUPLICATE_RULE_ID,
/// UNKNOWN_ACTION, CONFIG_INVALID for anything else (missing fields,
/// unknown keys, a MASK rule naming no pii.* category).
PolicyTemplate parse_policy(std::string_view document, std::string_view source = "<policy>");
PolicyTemplate load_policy_file(const std::filesystem::path& path);
// Every *.yaml / *.yml / *.json file, sorted by name.
std::vector<PolicyTemplate> load_policy_dir(const std::filesystem::path& dir);

///   jurisdiction: gdpr
///   levels:
///     pii.email_address: HIGH
JurisdictionTable parse_jurisdiction(std::string_view document, std::string_view source = "<jurisdiction>");
JurisdictionTables load_jurisdiction_dir(const std::filesystem::path& dir);

}  // namespace guardrail::policy
