#include "guardrail/pii/detector.hpp"

namespace guardrail::pii {

PiiDetector::PiiDetector(std::shared_ptr<const Extractor> extractor) : extractor_(std::move(extractor)) {}

Finding to_finding(const ExtractionPair& pair, const RulePack& pack, std::string_view detector_id) {
  Finding f;
  f.detector_id = std::string(detector_id);
  f.category = category(pair.pii_type);
  f.span = pair.span;
  const auto* rule = pack.find(pair.pii_type);
  f.score = rule != nullptr ? rule->confidence : 1.0;
  f.label = std::string(tag(pair.pii_type));
  f.sensitivity = pair.sensitivity;
  return f;
}

std::vector<Finding> PiiDetector::detect(std::string_view text, const detect::DetectContext&) const {
  std::vector<Finding> out;
  for (const auto& pair : extractor_->extract(text)) out.push_back(to_finding(pair, extractor_->rules(), "pii"));
  return out;
}

detect::DetectorDescriptor pii_descriptor(std::string detector_id) {
  detect::DetectorDescriptor d;
  d.detector_id = std::move(detector_id);
  d.kind = detect::DetectorKind::Extraction;
  for (auto t : all_pii_types()) d.categories.push_back(category(t));
  return d;
}

}  // namespace guardrail::pii
