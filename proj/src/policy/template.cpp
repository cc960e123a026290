#include "guardrail/policy/template.hpp"

namespace guardrail::policy {

const PolicyRule* PolicyTemplate::find_rule(std::string_view rule_id) const {
  for (const auto& r : rules) {
    if (r.rule_id == rule_id) return &r;
  }
  return nullptr;
}

nlohmann::json to_json(const PolicyTemplate& t) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : t.rules) {
    nlohmann::json j{{"id", r.rule_id}, {"when", r.when.source()}, {"action", to_string(r.action)}};
    if (r.action == Decision::Mask) j["mask_style"] = pii::to_string(r.mask_style);
    if (!r.message.empty()) j["message"] = r.message;
    rules.push_back(std::move(j));
  }
  return {{"policy_id", t.policy_id},
          {"jurisdiction", t.jurisdiction},
          {"default_action", to_string(t.default_action)},
          {"block_message", t.block_message},
          {"rules", std::move(rules)}};
}

}  // namespace guardrail::policy
