#include "guardrail/policy/engine.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "guardrail/core/error.hpp"
#include "guardrail/pii/categories.hpp"
#include "guardrail/pii/redact.hpp"

namespace guardrail::policy {

bool is_extraction(const Finding& f) { return f.category.starts_with(pii::kCategoryPrefix); }

std::vector<std::optional<Sensitivity>> PrivacyAssessment::levels(const std::vector<Finding>& findings) const {
  std::vector<std::optional<Sensitivity>> out(findings.size());
  for (std::size_t i = 0; i < findings.size(); ++i) out[i] = findings[i].sensitivity;
  for (const auto& e : entries) {
    if (e.finding < out.size()) out[e.finding] = e.level;
  }
  return out;
}

PrivacyAssessment infer(const std::vector<Finding>& findings, const PolicyTemplate& tmpl,
                        std::string_view jurisdiction, const JurisdictionTables& tables) {
  std::vector<const JurisdictionTable*> active;
  for (auto tag : {std::string_view(tmpl.jurisdiction), jurisdiction}) {
    auto it = tables.find(std::string(tag));
    if (it != tables.end() && std::find(active.begin(), active.end(), &it->second) == active.end()) {
      active.push_back(&it->second);
    }
  }
  PrivacyAssessment out;
  for (std::size_t i = 0; i < findings.size(); ++i) {
    const auto& f = findings[i];
    if (!is_extraction(f)) continue;
    PrivacyAssessment::Entry e{i, f.sensitivity.value_or(kDefaultExtractionLevel), "detector"};
    for (const auto* table : active) {
      for (const auto& [pattern, level] : table->levels) {
        if (level > e.level && glob_match(pattern, f.category)) {
          e.level = level;
          e.rationale = fmt::format("{}:{}", table->jurisdiction, pattern);
        }
      }
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

std::vector<std::vector<std::size_t>> sentence_map(std::string_view text, const std::vector<Finding>& findings,
                                                   const classify::SentenceSplitter& splitter) {
  std::vector<std::vector<std::size_t>> out(findings.size());
  bool any_span = std::any_of(findings.begin(), findings.end(), [](const Finding& f) { return f.span.has_value(); });
  if (!any_span) return out;
  auto sentences = splitter.split(text);
  for (std::size_t i = 0; i < findings.size(); ++i) {
    if (findings[i].span) out[i] = classify::sentences_touching(sentences, *findings[i].span);
  }
  return out;
}

std::vector<RuleFiring> decide(const std::vector<Finding>& findings, const PrivacyAssessment& assessment,
                               const PolicyTemplate& tmpl, Direction direction,
                               const std::vector<std::vector<std::size_t>>& sentences) {
  const auto levels = assessment.levels(findings);
  EvalContext ctx{findings, levels, sentences, direction};
  std::vector<RuleFiring> out;
  for (const auto& rule : tmpl.rules) {
    std::set<std::size_t> matched;
    for (std::size_t i = 0; i < findings.size(); ++i) {
      auto partners = rule.when.match(ctx, i);
      if (!partners) continue;
      matched.insert(i);
      matched.insert(partners->begin(), partners->end());
    }
    if (matched.empty()) continue;
    out.push_back(RuleFiring{tmpl.policy_id, rule.rule_id, rule.action,
                             std::vector<std::size_t>(matched.begin(), matched.end()), rule.message});
  }
  return out;
}

std::vector<RuleFiring> decide(const std::vector<Finding>& findings, const PrivacyAssessment& assessment,
                               const PolicyTemplate& tmpl, Direction direction, std::string_view text) {
  return decide(findings, assessment, tmpl, direction, sentence_map(text, findings));
}

Decision decision_of(const PolicyTemplate& tmpl, const std::vector<RuleFiring>& firings) {
  Decision d = tmpl.default_action;
  for (const auto& f : firings) d = combine(d, f.action);
  return d;
}

namespace {

struct MaskTarget {
  std::size_t finding = 0;
  Span span;
  pii::PiiType type = pii::PiiType::PersonName;
  pii::RedactStyle style = pii::RedactStyle::MaskType;
};

std::vector<MaskTarget> mask_targets(const std::vector<Finding>& findings, const std::vector<PolicyOutcome>& outcomes) {
  std::map<std::size_t, MaskTarget> by_finding;
  for (const auto& o : outcomes) {
    for (const auto& firing : o.firings) {
      if (firing.action != Decision::Mask) continue;
      const auto* rule = o.tmpl->find_rule(firing.rule_id);
      const auto style = rule != nullptr ? rule->mask_style : pii::RedactStyle::MaskType;
      for (auto idx : firing.matched) {
        const auto& f = findings[idx];
        auto type = pii::pii_type_from_category(f.category);
        if (!type || !f.span || f.span->length() == 0) continue;
        auto [it, inserted] = by_finding.try_emplace(idx, MaskTarget{idx, *f.span, *type, style});
        if (!inserted && style == pii::RedactStyle::RedactFull) it->second.style = style;
      }
    }
  }
  std::vector<MaskTarget> all;
  for (auto& [_, t] : by_finding) all.push_back(t);
  // Longest span wins an overlap; ties go to the earlier start, then the
  // lower finding index.
  std::sort(all.begin(), all.end(), [](const MaskTarget& a, const MaskTarget& b) {
    if (a.span.length() != b.span.length()) return a.span.length() > b.span.length();
    if (a.span.start != b.span.start) return a.span.start < b.span.start;
    return a.finding < b.finding;
  });
  std::vector<MaskTarget> kept;
  for (const auto& t : all) {
    bool clash = std::any_of(kept.begin(), kept.end(), [&](const MaskTarget& k) { return k.span.overlaps(t.span); });
    if (!clash) kept.push_back(t);
  }
  return kept;
}

}  // namespace

Verdict act(std::string_view text, const std::vector<Finding>& findings, const std::vector<PolicyOutcome>& outcomes) {
  Verdict v;
  v.findings = findings;
  std::map<std::size_t, Sensitivity> assessed;
  for (const auto& o : outcomes) {
    for (const auto& e : o.assessment.entries) {
      auto [it, inserted] = assessed.try_emplace(e.finding, e.level);
      if (!inserted) it->second = std::max(it->second, e.level);
    }
  }
  for (const auto& [idx, level] : assessed) {
    if (idx < v.findings.size()) v.findings[idx].sensitivity = level;
  }

  const PolicyTemplate* block_owner = nullptr;
  for (const auto& o : outcomes) {
    Decision fired = Decision::Pass;
    for (const auto& f : o.firings) {
      fired = combine(fired, f.action);
      v.audit.push_back(f);
      if (f.action == Decision::Warn) {
        v.warnings.push_back(!f.message.empty() ? f.message
                                                : fmt::format("policy {} rule {} matched", f.policy_id, f.rule_id));
      }
      if (f.action == Decision::Block && block_owner == nullptr) block_owner = o.tmpl;
    }
    if (o.tmpl->default_action > fired) {
      v.audit.push_back(RuleFiring{o.tmpl->policy_id, std::string(kDefaultActionRule), o.tmpl->default_action, {}, {}});
      if (o.tmpl->default_action == Decision::Block && block_owner == nullptr) block_owner = o.tmpl;
    }
    v.decision = combine(v.decision, decision_of(*o.tmpl, o.firings));
  }

  if (v.decision == Decision::Block) {
    v.output_text = block_owner != nullptr ? block_owner->block_message : std::string(kDefaultBlockMessage);
    return v;
  }
  if (v.decision == Decision::Mask) {
    std::vector<pii::Replacement> reps;
    for (const auto& t : mask_targets(findings, outcomes)) {
      reps.push_back({t.span, pii::replacement_for(t.type, t.span.length(), t.style)});
    }
    try {
      v.output_text = pii::apply_replacements(text, std::move(reps));
    } catch (const Error& e) {
      // Unmaskable text must not leak: fail closed.
      const PolicyTemplate* owner = outcomes.empty() ? nullptr : outcomes.front().tmpl;
      v.decision = Decision::Block;
      v.audit.push_back(RuleFiring{owner != nullptr ? owner->policy_id : std::string(),
                                   std::string(kRedactionFailureRule), Decision::Block, {}, e.what()});
      v.output_text = owner != nullptr ? owner->block_message : std::string(kDefaultBlockMessage);
    }
    return v;
  }
  v.output_text = std::string(text);
  return v;
}

Verdict act(std::string_view text, const std::vector<RuleFiring>& firings, const std::vector<Finding>& findings,
            const PolicyTemplate& tmpl) {
  return act(text, findings, std::vector<PolicyOutcome>{PolicyOutcome{&tmpl, {}, firings}});
}

Verdict evaluate(std::string_view text, const std::vector<Finding>& findings,
                 const std::vector<const PolicyTemplate*>& templates, std::string_view jurisdiction,
                 Direction direction, const JurisdictionTables& tables) {
  const auto sentences = sentence_map(text, findings);
  std::vector<PolicyOutcome> outcomes;
  outcomes.reserve(templates.size());
  for (const auto* t : templates) {
    PolicyOutcome o;
    o.tmpl = t;
    o.assessment = infer(findings, *t, jurisdiction, tables);
    o.firings = decide(findings, o.assessment, *t, direction, sentences);
    outcomes.push_back(std::move(o));
  }
  return act(text, findings, outcomes);
}

}  // namespace guardrail::policy
