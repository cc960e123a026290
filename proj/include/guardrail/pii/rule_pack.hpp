#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/pii/categories.hpp"
#include "guardrail/pii/validators.hpp"

namespace guardrail::pii {

struct CompiledPattern;  // owns the regex engine object

struct PatternSpec {
  std::string expression;
  std::string validator_name;  // empty: no validator
  Validator validator = nullptr;
  std::shared_ptr<const CompiledPattern> compiled;
};

struct ContextTerm {
  std::string term;  // one or more words, matched case-insensitively
  double weight = 0.0;
};

// Lexicon-driven person-name matching: a capitalized given name followed by
// a capitalized word, or a courtesy title followed by a capitalized word.
struct NameLexicon {
  std::set<std::string> given_names;  // lowercase
  std::set<std::string> surnames;     // lowercase
  std::set<std::string> titles;       // lowercase, without the trailing dot
  std::set<std::string> stopwords;    // lowercase words never taken as a surname
};

inline constexpr int kDefaultContextWindow = 8;
inline constexpr double kDefaultContextThreshold = 1.5;

struct PiiRule {
  PiiType pii_type = PiiType::PersonName;
  std::vector<PatternSpec> patterns;
  Sensitivity base_sensitivity = Sensitivity::Low;
  std::vector<ContextTerm> context_terms;
  int context_window = kDefaultContextWindow;
  double context_threshold = kDefaultContextThreshold;
  double confidence = 0.9;  // score for matches without a validator
  std::optional<NameLexicon> names;
};

/// Immutable set of extraction rules, one per PII type at most.
///
/// File schema (YAML):
///
///   version: 1
///   rules:
///     - pii_type: credit_card_number        # one of the 13 tags
///       base_sensitivity: HIGH              # LOW | MODERATE | HIGH
///       validator: luhn                     # optional default for patterns
///       confidence: 0.9                     # optional
///       context_window: 8                   # optional, words per side
///       context_threshold: 1.5              # optional
///       patterns:
///         - '\b(?:\d{4}[ -]?){3}\d{4}\b'    # plain string, or
///         - {regex: '...', validator: iban} # per-pattern validator
///       context_terms: {"card number": 1.0, "expired": -1.0}
///       names: {given: [...], surnames: [...], titles: [...], stopwords: [...]}
///
/// When a pattern has a capture group, group 1 is the entity and the rest of
/// the match is context that anchors it.
class RulePack {
 public:
  static RulePack parse(std::string_view yaml_text, std::string_view source_name = "<memory>");
  static RulePack load_file(const std::filesystem::path& path);
  // data/rulepacks/default.yaml from the installed data directory.
  static const RulePack& builtin();

  const std::vector<PiiRule>& rules() const { return rules_; }
  const PiiRule* find(PiiType t) const;

 private:
  std::vector<PiiRule> rules_;
};

}  // namespace guardrail::pii
