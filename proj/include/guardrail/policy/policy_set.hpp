#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/detect/detector.hpp"
#include "guardrail/policy/template.hpp"

namespace guardrail::policy {

struct PolicySet {
  std::map<std::string, std::shared_ptr<const PolicyTemplate>> templates;
  JurisdictionTables jurisdictions;

  const PolicyTemplate* find(std::string_view policy_id) const;
  std::vector<std::string> ids() const;
};

PolicySet make_policy_set(std::vector<PolicyTemplate> templates, JurisdictionTables jurisdictions = {});

/// Current policy set, replaced copy-on-write. Readers take a snapshot and
/// keep evaluating against it while a reload or upload swaps in a new set.
class PolicyRegistry {
 public:
  // Called before a change becomes visible: document set on upload, null on
  // delete. A throw aborts the change.
  using Persist = std::function<void(const std::string& policy_id, const std::string* document)>;

  explicit PolicyRegistry(PolicySet initial = {}, Persist persist = {});

  std::shared_ptr<const PolicySet> snapshot() const;
  void replace(PolicySet set);

  // Parses and validates; the document's policy_id must equal `policy_id`
  // (CONFIG_INVALID otherwise). Returns the stored template.
  std::shared_ptr<const PolicyTemplate> put(const std::string& policy_id, std::string_view document);
  // NOT_FOUND for an unknown id.
  void remove(const std::string& policy_id);

 private:
  mutable std::mutex mu_;
  std::mutex write_mu_;
  std::shared_ptr<const PolicySet> current_;
  Persist persist_;
};

/// An explicit fail_mode wins. Otherwise a detector fails closed when any
/// loaded BLOCK rule names a category pattern matching one of its
/// categories, and fails open elsewhere.
detect::FailMode effective_fail_mode(const detect::DetectorDescriptor& d, const PolicySet& set);

}  // namespace guardrail::policy
