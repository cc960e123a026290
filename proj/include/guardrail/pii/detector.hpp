#pragma once

#include <memory>
#include <string>

#include "guardrail/detect/detector.hpp"
#include "guardrail/pii/extractor.hpp"

namespace guardrail::pii {

// Emits one "pii.<type>" finding per extraction pair, carrying its span,
// contextual sensitivity and the rule's confidence as score.
class PiiDetector : public detect::Detector {
 public:
  explicit PiiDetector(std::shared_ptr<const Extractor> extractor);

  std::vector<Finding> detect(std::string_view text, const detect::DetectContext& ctx) const override;

 private:
  std::shared_ptr<const Extractor> extractor_;
};

Finding to_finding(const ExtractionPair& pair, const RulePack& pack, std::string_view detector_id);

detect::DetectorDescriptor pii_descriptor(std::string detector_id = "pii");

}  // namespace guardrail::pii
