#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "guardrail/core/types.hpp"

namespace guardrail::orchestrator {

/// Shield request body:
///   {"text": str, "tenant": str?, "jurisdiction": str?, "policy_ids": [str]?,
///    "detectors": [str]?, "request_id": str?}
/// INVALID_ARGUMENT on malformed JSON or wrongly typed fields. A missing
/// request_id is generated.
ShieldRequest decode_shield_request(std::string_view body, Direction direction);
nlohmann::json to_json(const ShieldRequest& req);

/// Verdict body:
///   {"decision": "PASS"|"WARN"|"MASK"|"BLOCK", "output_text": str,
///    "warnings": [str], "audit": [{"policy_id", "rule_id", "action",
///    "matched": [int], "message"}], "timings": {detector_id: ms},
///    "degraded": [str], "findings": [finding]}
/// finding: {"detector_id", "category", "label", "score",
///           "span": {"start","end"} | null, "sensitivity": str | null,
///           "evidence": str | null}
/// `matched` indexes into `findings`.
nlohmann::json to_json(const Finding& f);
Finding finding_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Verdict& v);
Verdict verdict_from_json(const nlohmann::json& j);

nlohmann::json error_json(std::string_view code, std::string_view message);

std::string new_request_id();

}  // namespace guardrail::orchestrator
