#include "guardrail/policy/policy_set.hpp"

#include <fmt/format.h>

#include "guardrail/core/error.hpp"
#include "guardrail/policy/loader.hpp"

namespace guardrail::policy {

const PolicyTemplate* PolicySet::find(std::string_view policy_id) const {
  auto it = templates.find(std::string(policy_id));
  return it == templates.end() ? nullptr : it->second.get();
}

std::vector<std::string> PolicySet::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : templates) out.push_back(id);
  return out;
}

PolicySet make_policy_set(std::vector<PolicyTemplate> templates, JurisdictionTables jurisdictions) {
  PolicySet set;
  set.jurisdictions = std::move(jurisdictions);
  for (auto& t : templates) {
    auto id = t.policy_id;
    if (!set.templates.emplace(id, std::make_shared<const PolicyTemplate>(std::move(t))).second) {
      throw Error(ErrorCode::ConfigInvalid, fmt::format("policy_id '{}' defined twice", id));
    }
  }
  return set;
}

PolicyRegistry::PolicyRegistry(PolicySet initial, Persist persist)
    : current_(std::make_shared<const PolicySet>(std::move(initial))), persist_(std::move(persist)) {}

std::shared_ptr<const PolicySet> PolicyRegistry::snapshot() const {
  std::lock_guard lock(mu_);
  return current_;
}

void PolicyRegistry::replace(PolicySet set) {
  auto next = std::make_shared<const PolicySet>(std::move(set));
  std::lock_guard write(write_mu_);
  std::lock_guard lock(mu_);
  current_ = std::move(next);
}

std::shared_ptr<const PolicyTemplate> PolicyRegistry::put(const std::string& policy_id, std::string_view document) {
  auto parsed = parse_policy(document, policy_id);
  if (parsed.policy_id != policy_id) {
    throw Error(ErrorCode::ConfigInvalid,
                fmt::format("document declares policy_id '{}' but was uploaded as '{}'", parsed.policy_id, policy_id));
  }
  auto tmpl = std::make_shared<const PolicyTemplate>(std::move(parsed));
  std::lock_guard write(write_mu_);
  auto next = std::make_shared<PolicySet>(*snapshot());
  next->templates[policy_id] = tmpl;
  if (persist_) {
    const std::string doc(document);
    persist_(policy_id, &doc);
  }
  std::lock_guard lock(mu_);
  current_ = std::move(next);
  return tmpl;
}

void PolicyRegistry::remove(const std::string& policy_id) {
  std::lock_guard write(write_mu_);
  auto next = std::make_shared<PolicySet>(*snapshot());
  if (next->templates.erase(policy_id) == 0) throw Error(ErrorCode::NotFound, "no policy '" + policy_id + "'");
  if (persist_) persist_(policy_id, nullptr);
  std::lock_guard lock(mu_);
  current_ = std::move(next);
}

detect::FailMode effective_fail_mode(const detect::DetectorDescriptor& d, const PolicySet& set) {
  if (d.fail_mode) return *d.fail_mode;
  for (const auto& [_, t] : set.templates) {
    for (const auto& rule : t->rules) {
      if (rule.action != Decision::Block) continue;
      for (const auto& glob : rule.when.category_globs()) {
        for (const auto& cat : d.categories) {
          if (glob_match(glob, cat)) return detect::FailMode::FailClosed;
        }
      }
    }
  }
  return detect::FailMode::FailOpen;
}

}  // namespace guardrail::policy
