#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "guardrail/core/tokenize.hpp"
#include "guardrail/pii/categories.hpp"
#include "guardrail/pii/rule_pack.hpp"

namespace guardrail::pii {

/// Pattern + validator + name-lexicon extraction followed by contextual
/// sensitivity scoring. Stateless after construction.
class Extractor {
 public:
  explicit Extractor(std::shared_ptr<const RulePack> pack);
  // Uses RulePack::builtin().
  Extractor();

  // Pairs sorted by span start (then longer first, then type order);
  // same-type overlaps merged to the longest match; validator failures dropped.
  std::vector<ExtractionPair> extract(std::string_view text) const;

  const RulePack& rules() const { return *pack_; }

 private:
  std::shared_ptr<const RulePack> pack_;
};

// Raises base sensitivity one level when the weighted sum of context terms
// found within `rule.context_window` words of the span exceeds the
// threshold, lowers it when the sum is below -threshold.
Sensitivity score_context(std::string_view text, const ExtractionPair& pair, const PiiRule& rule);
Sensitivity score_context(const std::vector<WordToken>& tokens, const Span& span, const PiiRule& rule);
// Signed weight sum used by score_context.
double context_weight(const std::vector<WordToken>& tokens, const Span& span, const PiiRule& rule);

// Keeps the longest of every cluster of overlapping same-type pairs (ties go
// to the earlier start). Output sorted like Extractor::extract.
std::vector<ExtractionPair> merge_same_type(std::vector<ExtractionPair> pairs);
void sort_pairs(std::vector<ExtractionPair>& pairs);

// Batch kernels: identical output, serial reference and OpenMP version.
std::vector<std::vector<ExtractionPair>> extract_batch_serial(const Extractor& ex,
                                                              std::span<const std::string> texts);
std::vector<std::vector<ExtractionPair>> extract_batch_parallel(const Extractor& ex,
                                                                std::span<const std::string> texts);

}  // namespace guardrail::pii
