#pragma once

#include <string_view>
#include <vector>

#include "guardrail/classify/lexicon.hpp"
#include "guardrail/classify/sentences.hpp"
#include "guardrail/core/types.hpp"

namespace guardrail::classify {

struct KeywordScore {
  double mass = 0.0;        // sum of keyword weights over token occurrences
  std::size_t tokens = 0;   // token count of the scored text
  double normalized = 0.0;  // mass / tokens
  double score = 0.0;       // normalized / (normalized + 1)
};

KeywordScore keyword_score(const CategoryLexicon& lexicon, std::string_view text);

// Whole-text finding: label "positive" iff score >= threshold; no span.
Finding classify(const CategoryLexicon& lexicon, std::string_view text);

struct SentenceScore {
  Span span;
  double score = 0.0;
};

std::vector<SentenceScore> score_sentences(const CategoryLexicon& lexicon, std::string_view text,
                                           const SentenceSplitter& splitter = SentenceSplitter::builtin());

// Findings for the sentences whose score reaches the threshold.
std::vector<Finding> sentence_findings(const CategoryLexicon& lexicon, std::string_view text,
                                       const SentenceSplitter& splitter = SentenceSplitter::builtin());

}  // namespace guardrail::classify
