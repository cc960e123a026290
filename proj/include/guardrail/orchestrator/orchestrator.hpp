#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "guardrail/detect/registry.hpp"
#include "guardrail/detect/worker_pool.hpp"
#include "guardrail/orchestrator/config.hpp"
#include "guardrail/policy/policy_set.hpp"

namespace guardrail::orchestrator {

struct OrchestrationContext {
  ShieldRequest request;
  std::map<std::string, detect::DetectorResult> results;  // one per dispatched detector
  std::chrono::steady_clock::time_point started_at;
  std::chrono::steady_clock::time_point finished_at;
  std::vector<std::string> degraded;
};

inline constexpr std::string_view kFailClosedRulePrefix = "fail_closed:";

class Orchestrator {
 public:
  Orchestrator(std::shared_ptr<const detect::DetectorRegistry> detectors,
               std::shared_ptr<policy::PolicyRegistry> policies, std::size_t detector_threads,
               std::vector<std::string> default_policies = {});

  /// Validates, fans out to registry ∩ allowlist ∩ direction, waits for
  /// every detector to resolve, then runs the policy manager. Findings of
  /// degraded detectors are dropped; a degraded FAIL_CLOSED detector forces
  /// BLOCK through a "fail_closed:<id>" audit entry, a FAIL_OPEN one adds a
  /// warning. Throws Error with the validation code or
  /// NO_DETECTORS_APPLICABLE. Requests without policy_ids use the defaults.
  Verdict shield(const ShieldRequest& request, OrchestrationContext* context = nullptr) const;

  std::shared_ptr<const detect::DetectorRegistry> detectors() const;
  void replace_detectors(std::shared_ptr<const detect::DetectorRegistry> detectors);
  policy::PolicyRegistry& policies() const { return *policies_; }
  const std::vector<std::string>& default_policies() const { return default_policies_; }

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const detect::DetectorRegistry> detectors_;
  std::shared_ptr<policy::PolicyRegistry> policies_;
  std::vector<std::string> default_policies_;
  std::unique_ptr<detect::WorkerPool> pool_;
};

// Instantiates every configured detector (loading rule packs, lexicons and
// corpora). CONFIG_INVALID / IO_FAILURE propagate.
std::shared_ptr<const detect::DetectorRegistry> build_registry(const ServiceConfig& config);

// Policies from policies_dir, jurisdiction tables from jurisdictions_dir.
policy::PolicySet load_policy_set(const ServiceConfig& config);

std::shared_ptr<Orchestrator> build_orchestrator(const ServiceConfig& config,
                                                 policy::PolicyRegistry::Persist persist = {});

}  // namespace guardrail::orchestrator
