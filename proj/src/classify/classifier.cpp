#include "guardrail/classify/classifier.hpp"

#include "guardrail/core/utf8.hpp"

namespace guardrail::classify {

KeywordScore keyword_score(const CategoryLexicon& lexicon, std::string_view text) {
  KeywordScore s;
  for (const auto& tok : lexicon_tokens(text)) {
    ++s.tokens;
    if (auto it = lexicon.keywords.find(tok); it != lexicon.keywords.end()) s.mass += it->second;
  }
  if (s.tokens == 0) return s;
  s.normalized = s.mass / static_cast<double>(s.tokens);
  s.score = s.normalized / (s.normalized + 1.0);
  return s;
}

Finding classify(const CategoryLexicon& lexicon, std::string_view text) {
  auto s = keyword_score(lexicon, text);
  Finding f;
  f.category = lexicon.category;
  f.score = s.score;
  f.label = s.score >= lexicon.threshold && s.mass > 0.0 ? "positive" : "negative";
  return f;
}

std::vector<SentenceScore> score_sentences(const CategoryLexicon& lexicon, std::string_view text,
                                           const SentenceSplitter& splitter) {
  Utf8Text utext(text);
  std::vector<SentenceScore> out;
  for (const auto& span : splitter.split(text)) {
    out.push_back({span, keyword_score(lexicon, utext.slice(span)).score});
  }
  return out;
}

std::vector<Finding> sentence_findings(const CategoryLexicon& lexicon, std::string_view text,
                                       const SentenceSplitter& splitter) {
  std::vector<Finding> out;
  for (const auto& s : score_sentences(lexicon, text, splitter)) {
    if (s.score <= 0.0 || s.score < lexicon.threshold) continue;
    Finding f;
    f.category = lexicon.category;
    f.span = s.span;
    f.score = s.score;
    f.label = "positive";
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace guardrail::classify
