#include "guardrail/classify/detector.hpp"

namespace guardrail::classify {

KeywordClassifierDetector::KeywordClassifierDetector(CategoryLexicon lexicon) : lexicon_(std::move(lexicon)) {}

std::vector<Finding> KeywordClassifierDetector::detect(std::string_view text, const detect::DetectContext&) const {
  auto f = classify(lexicon_, text);
  if (f.label != "positive") return {};
  return {std::move(f)};
}

SentenceLexiconDetector::SentenceLexiconDetector(CategoryLexicon lexicon, const SentenceSplitter& splitter)
    : lexicon_(std::move(lexicon)), splitter_(splitter) {}

std::vector<Finding> SentenceLexiconDetector::detect(std::string_view text, const detect::DetectContext&) const {
  return sentence_findings(lexicon_, text, splitter_);
}

detect::DetectorDescriptor classifier_descriptor(std::string detector_id, const CategoryLexicon& lexicon) {
  detect::DetectorDescriptor d;
  d.detector_id = std::move(detector_id);
  d.kind = detect::DetectorKind::Classification;
  d.categories = {lexicon.category};
  return d;
}

}  // namespace guardrail::classify
