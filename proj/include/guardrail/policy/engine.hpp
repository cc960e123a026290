#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/classify/sentences.hpp"
#include "guardrail/core/types.hpp"
#include "guardrail/policy/template.hpp"

namespace guardrail::policy {

// pii.* findings are extraction findings; everything else is classification
// or comparison output and passes through inference unchanged.
bool is_extraction(const Finding& f);

struct PrivacyAssessment {
  struct Entry {
    std::size_t finding = 0;
    Sensitivity level = Sensitivity::Low;
    std::string rationale;  // "detector" or "<jurisdiction>:<category pattern>"

    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries;  // one per extraction finding, ascending

  // Per-finding level for predicate evaluation (nullopt for the rest).
  std::vector<std::optional<Sensitivity>> levels(const std::vector<Finding>& findings) const;

  friend bool operator==(const PrivacyAssessment&, const PrivacyAssessment&) = default;
};

// Extraction findings without a detector sensitivity start at MODERATE.
inline constexpr Sensitivity kDefaultExtractionLevel = Sensitivity::Moderate;

/// level = max(detector sensitivity, every override row matching the
/// category in the tables of the template's and the request's jurisdiction).
PrivacyAssessment infer(const std::vector<Finding>& findings, const PolicyTemplate& tmpl,
                        std::string_view jurisdiction, const JurisdictionTables& tables);

// Sentence indices touched by each spanned finding.
std::vector<std::vector<std::size_t>> sentence_map(std::string_view text, const std::vector<Finding>& findings,
                                                   const classify::SentenceSplitter& splitter =
                                                       classify::SentenceSplitter::builtin());

/// Every rule whose predicate some finding satisfies fires, in rule order.
/// matched = satisfying findings plus their SAME_SENTENCE partners.
std::vector<RuleFiring> decide(const std::vector<Finding>& findings, const PrivacyAssessment& assessment,
                               const PolicyTemplate& tmpl, Direction direction,
                               const std::vector<std::vector<std::size_t>>& sentences);
std::vector<RuleFiring> decide(const std::vector<Finding>& findings, const PrivacyAssessment& assessment,
                               const PolicyTemplate& tmpl, Direction direction, std::string_view text);

// max(default_action, every firing's action).
Decision decision_of(const PolicyTemplate& tmpl, const std::vector<RuleFiring>& firings);

inline constexpr std::string_view kDefaultActionRule = "default_action";
inline constexpr std::string_view kRedactionFailureRule = "redaction_failure";

struct PolicyOutcome {
  const PolicyTemplate* tmpl = nullptr;
  PrivacyAssessment assessment;
  std::vector<RuleFiring> firings;
};

/// BLOCK: output = block_message of the template owning the first blocking
/// audit entry. MASK: spans of pii.* findings matched by MASK firings are
/// replaced (overlaps resolved longest first; REDACT_FULL wins over
/// MASK_TYPE for the same finding). WARN: messages collected. When the
/// default action raises the decision above every firing, a synthetic
/// "default_action" entry is audited.
Verdict act(std::string_view text, const std::vector<Finding>& findings, const std::vector<PolicyOutcome>& outcomes);
Verdict act(std::string_view text, const std::vector<RuleFiring>& firings, const std::vector<Finding>& findings,
            const PolicyTemplate& tmpl);

// infer + decide + act for every template, in the order given.
Verdict evaluate(std::string_view text, const std::vector<Finding>& findings,
                 const std::vector<const PolicyTemplate*>& templates, std::string_view jurisdiction,
                 Direction direction, const JurisdictionTables& tables);

}  // namespace guardrail::policy
