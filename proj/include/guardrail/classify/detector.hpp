#pragma once

#include "guardrail/classify/classifier.hpp"
#include "guardrail/detect/detector.hpp"

namespace guardrail::classify {

// Whole-text keyword classifier; emits a finding only for positive texts.
class KeywordClassifierDetector : public detect::Detector {
 public:
  explicit KeywordClassifierDetector(CategoryLexicon lexicon);
  std::vector<Finding> detect(std::string_view text, const detect::DetectContext& ctx) const override;
  const CategoryLexicon& lexicon() const { return lexicon_; }

 private:
  CategoryLexicon lexicon_;
};

// Per-sentence scorer (HAP style); one spanned finding per flagged sentence.
class SentenceLexiconDetector : public detect::Detector {
 public:
  explicit SentenceLexiconDetector(CategoryLexicon lexicon,
                                   const SentenceSplitter& splitter = SentenceSplitter::builtin());
  std::vector<Finding> detect(std::string_view text, const detect::DetectContext& ctx) const override;
  const CategoryLexicon& lexicon() const { return lexicon_; }

 private:
  CategoryLexicon lexicon_;
  SentenceSplitter splitter_;
};

detect::DetectorDescriptor classifier_descriptor(std::string detector_id, const CategoryLexicon& lexicon);

}  // namespace guardrail::classify
